#pragma once

// The vulnerable web application: seed data, controllers and their
// vulnerable/fixed variants, selected by BuildConfig.

#include "brew/catalog.hpp"
#include "brew/crypto.hpp"
#include "brew/database.hpp"
#include "brew/http.hpp"
#include "brew/session.hpp"

#include <atomic>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace brew::app {

/// Documented seed credentials. Plain users are public knowledge for the
/// exercises; the admin passwords are lecturer material.
namespace seed {
inline constexpr std::string_view kAdminUser = "admin";
inline constexpr std::string_view kAdminPasswordWeak = "letmein";
inline constexpr std::string_view kAdminPasswordStrong = "Vx7#kettle-Rhubarb-92-Orbit";
inline constexpr std::string_view kAliceUser = "alice";
inline constexpr std::string_view kAlicePassword = "wonderland";
inline constexpr std::string_view kBobUser = "bob";
inline constexpr std::string_view kBobPassword = "builder";
inline constexpr std::string_view kManagerUser = "admin";
inline constexpr std::string_view kManagerPassword = "admin";
inline constexpr std::int64_t kAdminId = 1;
inline constexpr std::int64_t kAliceId = 2;
inline constexpr std::int64_t kBobId = 3;
}  // namespace seed

struct UserRecord {
    std::int64_t id = 0;
    std::string username;       // M_USER.muname
    std::string password_hash;  // M_USER.mpwd
    http::Role role = http::Role::User;
};

struct CommentRecord {
    std::int64_t id = 0;
    std::int64_t author_id = 0;
    std::string body;
    std::string created_at;
};

struct SeedData {
    std::vector<UserRecord> users;
    std::vector<CommentRecord> comments;
    std::pair<std::string, std::string> manager_credentials;
};

/// Deterministic seed for a build: identical config => identical rows.
/// Fixed-mode hashes use per-user salts derived from the username.
SeedData make_seed(const vuln::BuildConfig& config);
/// Schema plus INSERT statements; re-running it restores the canonical state.
std::string seed_sql(const SeedData& seed);
void seed_database(Database& db, const std::string& sql);
inline void seed_database(Database& db, const SeedData& seed) { seed_database(db, seed_sql(seed)); }

std::vector<UserRecord> load_users(Database& db);

/// Client-side help script variant for the build (dom-xss-help).
std::string help_script(bool vulnerable);

/// Strips <script> elements. Not a sufficient XSS defence.
std::string strip_script_tags(std::string_view s);

/// Same-origin redirect target check used by the fixed redirect variant.
bool is_local_redirect(std::string_view target);

struct AppOptions {
    /// Seed script to (re)load; generated from make_seed(config) when empty.
    std::optional<std::string> seed_sql;
    /// Directory served under /static/ (bundle assets); embedded assets otherwise.
    std::optional<std::filesystem::path> assets_dir;
};

class Application {
public:
    explicit Application(vuln::BuildConfig config, AppOptions options = {});

    /// Never throws; faults become 500 pages.
    http::Response handle(const http::Request& req) const;

    const vuln::BuildConfig& config() const { return config_; }
    const http::Router& router() const { return router_; }
    const http::ViewRegistry& views() const { return views_; }
    Database& db() const { return db_; }
    http::SessionStore& sessions() const { return sessions_; }

    void reseed() const;
    bool verbose_errors() const;
    /// Called by the manager console's shutdown action.
    void set_shutdown_hook(std::function<void()> hook) { shutdown_hook_ = std::move(hook); }

    /// Adds a handler and route after construction (tests).
    void add_route(std::string pattern, http::Method method, std::string handler_id, http::Handler fn);

private:
    bool vulnerable(std::string_view id) const { return config_.vulnerable(id); }
    crypto::HashMode hash_mode() const;
    http::TokenStrength token_strength() const;

    std::optional<http::SessionRecord> current_session(const http::Request& req) const;
    std::string session_cookie(const std::string& id) const;
    http::Response page(const std::string& title, const http::ModelAndView& mv,
                        const std::optional<http::SessionRecord>& session) const;
    http::Response redirect_to_login() const { return http::Response::redirect("/login.secu"); }

    void register_routes();

    http::Response index(const http::Request& req) const;
    http::Response search(const http::Request& req) const;
    http::Response login_form(const http::Request& req) const;
    http::Response login(const http::Request& req) const;
    http::Response logout(const http::Request& req) const;
    http::Response home(const http::Request& req) const;
    http::Response profile_form(const http::Request& req) const;
    http::Response profile_update(const http::Request& req) const;
    http::Response comments_list(const http::Request& req) const;
    http::Response comments_post(const http::Request& req) const;
    http::Response redirect(const http::Request& req) const;
    http::Response admin_panel(const http::Request& req) const;
    http::Response admin_announce(const http::Request& req) const;
    http::Response admin_users(const http::Request& req) const;
    http::Response admin_report(const http::Request& req) const;
    http::Response manager(const http::Request& req) const;
    http::Response register_form(const http::Request& req) const;
    http::Response register_user(const http::Request& req) const;
    http::Response help(const http::Request& req) const;
    http::Response static_asset(const http::Request& req) const;
    http::Response hints(const http::Request& req) const;
    http::Response reseed_hook(const http::Request& req) const;

    vuln::BuildConfig config_;
    AppOptions options_;
    std::string seed_sql_;
    mutable Database db_;
    mutable http::SessionStore sessions_;
    http::Router router_;
    http::ViewRegistry views_;
    mutable std::atomic<int> verbose_override_{-1};  // -1: build default, 0/1: manager toggle
    std::function<void()> shutdown_hook_;
};

}  // namespace brew::app
