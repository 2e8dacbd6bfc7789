#include "brew/app.hpp"

#include "views.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

namespace brew::app {

using http::Method;
using http::ModelAndView;
using http::Request;
using http::Response;
using http::Role;
namespace ids = vuln::ids;

namespace {

std::string sql_quote(std::string_view s)
{
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') out += "''";
        else out.push_back(c);
    }
    out += "'";
    return out;
}

std::vector<std::uint8_t> seed_salt(std::string_view username)
{
    auto digest = crypto::from_hex(crypto::sha256_hex("brew-seed-salt:" + std::string(username)));
    digest.resize(crypto::kSaltBytes);
    return digest;
}

Role parse_role(const std::optional<std::string>& s) { return s && *s == "admin" ? Role::Admin : Role::User; }

std::optional<std::int64_t> parse_int(std::string_view s)
{
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
    return v;
}

Response message(const http::ViewRegistry& views, int status, std::string heading, std::string text)
{
    ModelAndView mv("message");
    mv.add_object("heading", std::move(heading)).add_object("message", std::move(text));
    auto layout = ModelAndView("layout");
    layout.add_object("title", mv.model["heading"]).add_raw("content", views.render(mv)).add_raw("nav_user", "");
    return Response::html(views.render(layout), status);
}

std::string content_type_for(const std::filesystem::path& p)
{
    auto ext = p.extension().string();
    if (ext == ".js") return "application/javascript";
    if (ext == ".css") return "text/css";
    if (ext == ".html") return "text/html; charset=utf-8";
    if (ext == ".json") return "application/json";
    return "application/octet-stream";
}

}  // namespace

SeedData make_seed(const vuln::BuildConfig& config)
{
    bool weak = config.vulnerable(ids::kMd5AdminPass);
    auto hash = [&](std::string_view user, std::string_view pw) {
        return weak ? crypto::hash_password(pw, crypto::HashMode::Vulnerable)
                    : crypto::hash_password_salted(pw, seed_salt(user));
    };
    SeedData seed;
    auto admin_pw = weak ? seed::kAdminPasswordWeak : seed::kAdminPasswordStrong;
    seed.users = {
        {seed::kAdminId, std::string(seed::kAdminUser), hash(seed::kAdminUser, admin_pw), Role::Admin},
        {seed::kAliceId, std::string(seed::kAliceUser), hash(seed::kAliceUser, seed::kAlicePassword), Role::User},
        {seed::kBobId, std::string(seed::kBobUser), hash(seed::kBobUser, seed::kBobPassword), Role::User},
    };
    seed.comments = {
        {1, seed::kAliceId, "The first batch of the Yirgacheffe roast is in. Smells fantastic!", "2014-03-01 09:00:00"},
        {2, seed::kBobId, "Anyone tried the cold brew recipe from the help page?", "2014-03-01 10:30:00"},
    };
    seed.manager_credentials = {std::string(seed::kManagerUser), std::string(seed::kManagerPassword)};
    return seed;
}

std::string seed_sql(const SeedData& seed)
{
    std::ostringstream out;
    out << "-- BREW schema and seed data\n"
           "DROP TABLE IF EXISTS COMMENTS;\n"
           "DROP TABLE IF EXISTS SETTINGS;\n"
           "DROP TABLE IF EXISTS M_USER;\n"
           "CREATE TABLE M_USER (\n"
           "  ID INTEGER PRIMARY KEY,\n"
           "  muname TEXT NOT NULL,\n"
           "  mpwd TEXT NOT NULL,\n"
           "  role TEXT NOT NULL CHECK (role IN ('user', 'admin'))\n"
           ");\n"
           "CREATE TABLE COMMENTS (\n"
           "  ID INTEGER PRIMARY KEY,\n"
           "  author_id INTEGER NOT NULL REFERENCES M_USER(ID),\n"
           "  body TEXT NOT NULL,\n"
           "  created_at TEXT NOT NULL\n"
           ");\n"
           "CREATE TABLE SETTINGS (\n"
           "  name TEXT PRIMARY KEY,\n"
           "  value TEXT NOT NULL\n"
           ");\n";
    for (const auto& u : seed.users) {
        out << "INSERT INTO M_USER (ID, muname, mpwd, role) VALUES (" << u.id << ", " << sql_quote(u.username) << ", "
            << sql_quote(u.password_hash) << ", " << sql_quote(http::to_string(u.role)) << ");\n";
    }
    for (const auto& c : seed.comments) {
        out << "INSERT INTO COMMENTS (ID, author_id, body, created_at) VALUES (" << c.id << ", " << c.author_id << ", "
            << sql_quote(c.body) << ", " << sql_quote(c.created_at) << ");\n";
    }
    return out.str();
}

void seed_database(Database& db, const std::string& sql) { db.exec_script("BEGIN;\n" + sql + "COMMIT;\n"); }

std::vector<UserRecord> load_users(Database& db)
{
    std::vector<UserRecord> out;
    for (const auto& row : db.query("SELECT ID, muname, mpwd, role FROM M_USER ORDER BY ID")) {
        out.push_back({std::stoll(row[0].value_or("0")), row[1].value_or(""), row[2].value_or(""), parse_role(row[3])});
    }
    return out;
}

std::string strip_script_tags(std::string_view s)
{
    std::string out(s);
    auto lower = [](std::string v) {
        std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
        return v;
    };
    for (;;) {
        auto l = lower(out);
        auto open = l.find("<script");
        if (open == std::string::npos) break;
        auto close = l.find("</script>", open);
        out.erase(open, close == std::string::npos ? std::string::npos : close + 9 - open);
    }
    return out;
}

bool is_local_redirect(std::string_view target)
{
    if (target.empty() || target.front() != '/') return false;
    if (target.size() > 1 && (target[1] == '/' || target[1] == '\\')) return false;
    return std::none_of(target.begin(), target.end(), [](unsigned char c) { return c == '\\' || c < 0x20 || c == 0x7f; });
}

Application::Application(vuln::BuildConfig config, AppOptions options)
    : config_(std::move(config)), options_(std::move(options))
{
    for (const auto& id : config_.enabled) {
        if (!vuln::find(id)) throw http::ConfigError("unknown vulnerability id '" + id + "'");
    }
    if (vuln::resolve_selection(config_.enabled) != config_.enabled) {
        throw http::ConfigError("enabled set is not closed under the stage dependencies");
    }
    seed_sql_ = options_.seed_sql ? *options_.seed_sql : seed_sql(make_seed(config_));
    seed_database(db_, seed_sql_);
    register_views(views_);
    register_routes();
}

Response Application::handle(const Request& req) const
{
    return http::dispatch(router_, req, http::ErrorPolicy{[this] { return verbose_errors(); }});
}

void Application::reseed() const
{
    seed_database(db_, seed_sql_);
    sessions_.clear();
    verbose_override_ = -1;
}

bool Application::verbose_errors() const
{
    int o = verbose_override_.load();
    return o < 0 ? config_.verbose_errors() : o == 1;
}

void Application::add_route(std::string pattern, Method method, std::string handler_id, http::Handler fn)
{
    router_.add_handler(handler_id, std::move(fn));
    router_.register_route(std::move(pattern), method, std::move(handler_id));
}

crypto::HashMode Application::hash_mode() const
{
    return vulnerable(ids::kMd5AdminPass) ? crypto::HashMode::Vulnerable : crypto::HashMode::Fixed;
}

http::TokenStrength Application::token_strength() const
{
    return vulnerable(ids::kWeakSession) ? http::TokenStrength::Weak : http::TokenStrength::Strong;
}

void Application::register_routes()
{
    struct Entry {
        const char* pattern;
        Method method;
        const char* id;
        Response (Application::*fn)(const Request&) const;
    };
    std::vector<Entry> table = {
        {"/", Method::Get, "index", &Application::index},
        {"/search.secu", Method::Post, "search", &Application::search},
        {"/login.secu", Method::Get, "loginForm", &Application::login_form},
        {"/login.secu", Method::Post, "login", &Application::login},
        {"/logout.secu", Method::Get, "logout", &Application::logout},
        {"/home.secu", Method::Get, "home", &Application::home},
        {"/profile.secu", Method::Get, "profileForm", &Application::profile_form},
        {"/profile.secu", Method::Post, "profileUpdate", &Application::profile_update},
        {"/comments.secu", Method::Get, "commentsList", &Application::comments_list},
        {"/comments.secu", Method::Post, "commentsPost", &Application::comments_post},
        {"/redirect.secu", Method::Get, "redirect", &Application::redirect},
        {"/admin.secu", Method::Get, "adminPanel", &Application::admin_panel},
        {"/admin.secu", Method::Post, "adminAnnounce", &Application::admin_announce},
        {"/admin/users.secu", Method::Post, "adminUsers", &Application::admin_users},
        {"/admin/report.secu", Method::Get, "adminReport", &Application::admin_report},
        {"/register.secu", Method::Get, "registerForm", &Application::register_form},
        {"/register.secu", Method::Post, "register", &Application::register_user},
        {"/help.secu", Method::Get, "help", &Application::help},
        {"/static/*", Method::Get, "static", &Application::static_asset},
    };
    // Fixed variant: the management console is not deployed at all.
    if (vulnerable(ids::kDefaultManagerCreds)) {
        table.push_back({"/manager.secu", Method::Get, "managerGet", &Application::manager});
        table.push_back({"/manager.secu", Method::Post, "managerPost", &Application::manager});
    }
    if (config_.mode == vuln::DeployMode::Whitebox) {
        table.push_back({"/__hints/*", Method::Get, "hints", &Application::hints});
        table.push_back({"/__reseed", Method::Post, "reseed", &Application::reseed_hook});
    }
    for (const auto& e : table) {
        router_.add_handler(e.id, [this, fn = e.fn](const Request& r) { return (this->*fn)(r); });
        router_.register_route(e.pattern, e.method, e.id);
    }
}

std::optional<http::SessionRecord> Application::current_session(const Request& req) const
{
    auto id = req.cookie(http::kSessionCookie);
    if (!id) return std::nullopt;
    return sessions_.find(*id);
}

std::string Application::session_cookie(const std::string& id) const
{
    std::string c = std::string(http::kSessionCookie) + "=" + id + "; Path=/";
    if (!vulnerable(ids::kWeakSession)) c += "; HttpOnly; SameSite=Lax";
    return c;
}

namespace {

struct Caller {
    http::SessionRecord session;
    UserRecord user;
};

std::optional<Caller> authenticate(Database& db, const std::optional<http::SessionRecord>& session)
{
    if (!session || !session->user_id) return std::nullopt;
    auto rows = db.query("SELECT ID, muname, mpwd, role FROM M_USER WHERE ID = ?", {*session->user_id});
    if (rows.empty()) return std::nullopt;
    const auto& r = rows.front();
    return Caller{*session, {std::stoll(r[0].value_or("0")), r[1].value_or(""), r[2].value_or(""), parse_role(r[3])}};
}

std::string announcement(Database& db)
{
    auto rows = db.query("SELECT value FROM SETTINGS WHERE name = 'announcement'");
    return rows.empty() ? std::string{} : rows.front()[0].value_or("");
}

}  // namespace

Response Application::page(const std::string& title, const ModelAndView& mv,
                           const std::optional<http::SessionRecord>& session) const
{
    std::string nav = "<a href=\"/login.secu\">Log in</a>";
    if (auto caller = authenticate(db_, session)) {
        nav = "Logged in as <b>" + http::html_escape(caller->user.username) +
              "</b> | <a href=\"/home.secu\">Home</a> | <a href=\"/logout.secu\">Log out</a>";
    }
    ModelAndView layout("layout");
    layout.add_object("title", title).add_raw("content", views_.render(mv)).add_raw("nav_user", nav);
    if (config_.mode == vuln::DeployMode::Whitebox) {
        layout.add_raw("hint_script", "<script src=\"/static/hints.js\" defer></script>");
    }
    return Response::html(views_.render(layout));
}

Response Application::index(const Request& req) const
{
    return page("Welcome", ModelAndView("index"), current_session(req));
}

Response Application::search(const Request& req) const
{
    auto search = req.form_params.get_or("search");

    std::string results;
    if (!search.empty()) {
        auto rows = db_.query(
            "SELECT u.muname, c.body FROM COMMENTS c JOIN M_USER u ON u.ID = c.author_id "
            "WHERE instr(lower(c.body), lower(?)) > 0 ORDER BY c.ID DESC",
            {search});
        for (const auto& r : rows) {
            results += "<li><b>" + http::html_escape(r[0].value_or("")) + "</b>: " +
                       http::html_escape(r[1].value_or("")) + "</li>";
        }
    }

    ModelAndView mv("search");
    if (vulnerable(ids::kXssSearch)) {
        mv.add_raw("searchString", search);
    } else {
        mv.add_object("searchString", search);
    }
    mv.add_raw("results", results);
    return page("Search", mv, current_session(req));
}

Response Application::login_form(const Request& req) const
{
    auto session = current_session(req);
    auto resp = page("Log in", ModelAndView("login"), session);
    if (!session) {
        auto rec = sessions_.create(token_strength());
        resp.add_header("Set-Cookie", session_cookie(rec.session_id));
    }
    return resp;
}

Response Application::login(const Request& req) const
{
    auto username = req.form_params.get("username");
    auto password = req.form_params.get("password");
    if (!username || !password) return message(views_, 400, "Bad request", "username and password are required");

    std::optional<std::pair<std::int64_t, Role>> match;
    for (const auto& r : db_.query("SELECT ID, mpwd, role FROM M_USER WHERE muname = ? ORDER BY ID", {*username})) {
        if (crypto::verify_password(*password, r[1].value_or(""))) {
            match = {std::stoll(r[0].value_or("0")), parse_role(r[2])};
            break;
        }
    }
    if (!match) {
        ModelAndView mv("login");
        mv.add_object("error", "Invalid username or password.");
        return page("Log in", mv, std::nullopt);
    }

    auto existing = current_session(req);
    std::string sid;
    if (vulnerable(ids::kWeakSession) && existing) {
        sid = existing->session_id;
    } else {
        if (existing) sessions_.erase(existing->session_id);
        sid = sessions_.create(token_strength()).session_id;
    }
    auto csrf = crypto::random_token(16);
    sessions_.update(sid, [&](http::SessionRecord& s) {
        s.user_id = match->first;
        s.role = match->second;
        s.csrf_token = csrf;
    });
    auto resp = Response::redirect("/home.secu");
    resp.add_header("Set-Cookie", session_cookie(sid));
    return resp;
}

Response Application::logout(const Request& req) const
{
    if (auto s = current_session(req)) sessions_.erase(s->session_id);
    auto resp = redirect_to_login();
    resp.add_header("Set-Cookie", std::string(http::kSessionCookie) + "=; Path=/; Max-Age=0");
    return resp;
}

Response Application::home(const Request& req) const
{
    auto session = current_session(req);
    auto caller = authenticate(db_, session);
    if (!caller) return redirect_to_login();

    std::string members;
    for (const auto& u : load_users(db_)) {
        members += "<li>" + http::html_escape(u.username) + "</li>\n";
        if (vulnerable(ids::kMd5AdminPass)) {
            members += "<!-- debug: uid=" + std::to_string(u.id) + " mpwd=" + http::html_escape(u.password_hash) +
                       " -->\n";
        }
    }
    ModelAndView mv("home");
    mv.add_object("username", caller->user.username)
        .add_object("announcement", announcement(db_))
        .add_raw("members", members);
    return page("Home", mv, session);
}

Response Application::profile_form(const Request& req) const
{
    auto session = current_session(req);
    auto caller = authenticate(db_, session);
    if (!caller) return redirect_to_login();

    ModelAndView mv("profile");
    mv.add_object("uid", std::to_string(caller->user.id)).add_object("uname", caller->user.username);
    if (!vulnerable(ids::kCsrfProfile)) {
        mv.add_raw("csrf_field",
                   "<input type=\"hidden\" name=\"csrf\" value=\"" + http::html_escape(session->csrf_token.value_or("")) +
                       "\">");
    }
    return page("Profile", mv, session);
}

Response Application::profile_update(const Request& req) const
{
    auto session = current_session(req);
    auto caller = authenticate(db_, session);
    if (!caller) return redirect_to_login();

    if (!vulnerable(ids::kCsrfProfile)) {
        auto token = req.form_params.get("csrf");
        if (!token || !caller->session.csrf_token || *token != *caller->session.csrf_token) {
            return message(views_, 403, "Forbidden", "Invalid or missing form token.");
        }
    }

    auto uname = req.form_params.get("uname");
    auto upwd = req.form_params.get("upwd");
    auto uid = req.form_params.get("uid");
    if (!uname || !upwd || !uid) return message(views_, 400, "Bad request", "uname, upwd and uid are required");
    bool is_admin = caller->user.role == Role::Admin;
    auto pwd_hash = crypto::hash_password(*upwd, hash_mode());

    int changed = 0;
    if (vulnerable(ids::kSqliProfile)) {
        // Only the caller's own row may be edited.
        if (std::atoll(uid->c_str()) != caller->user.id && !is_admin) {
            return message(views_, 403, "Forbidden", "You can only edit your own profile.");
        }
        std::string sql = "update M_USER set "
                          "muname = ?, "
                          "mpwd = ? "
                          "where "
                          "ID = " + *uid;
        changed = db_.execute(sql, {*uname, pwd_hash});
    } else {
        auto id = parse_int(*uid);
        if (!id) return message(views_, 400, "Bad request", "uid must be an integer");
        if (*id != caller->user.id && !is_admin) {
            return message(views_, 403, "Forbidden", "You can only edit your own profile.");
        }
        changed = db_.execute("update M_USER set muname = ?, mpwd = ? where ID = ?", {*uname, pwd_hash, *id});
    }
    return message(views_, 200, "Profile updated", changed == 1 ? "Your profile was saved." : "No profile was saved.");
}

Response Application::comments_list(const Request& req) const
{
    auto offset = req.query_params.get_or("offset", "0");
    auto rows = db_.query(
        "SELECT u.muname, c.body, c.created_at FROM COMMENTS c JOIN M_USER u ON u.ID = c.author_id "
        "ORDER BY c.ID DESC LIMIT 20 OFFSET ?",
        {offset});

    std::string items;
    for (const auto& r : rows) {
        std::string body = r[1].value_or("");
        std::string item = "<li><b>" + http::html_escape(r[0].value_or("")) + "</b>: ";
        if (vulnerable(ids::kStoredXssComments)) {
            // body = strip_script_tags(body);
            item += body;
        } else {
            item += http::html_escape(body);
        }
        item += " <small>" + http::html_escape(r[2].value_or("")) + "</small></li>\n";
        items += item;
    }
    auto next = parse_int(offset).value_or(0) + 20;

    ModelAndView mv("comments");
    mv.add_raw("comments", items).add_object("next_offset", std::to_string(next));
    return page("Comments", mv, current_session(req));
}

Response Application::comments_post(const Request& req) const
{
    auto caller = authenticate(db_, current_session(req));
    if (!caller) return redirect_to_login();
    auto body = req.form_params.get("body");
    if (!body) return message(views_, 400, "Bad request", "body is required");
    db_.execute("INSERT INTO COMMENTS (author_id, body, created_at) VALUES (?, ?, datetime('now'))",
                {caller->user.id, *body});
    return Response::redirect("/comments.secu");
}

Response Application::redirect(const Request& req) const
{
    auto url = req.query_params.get("url");
    if (!url) return message(views_, 400, "Bad request", "url is required");
    if (!vulnerable(ids::kOpenRedirect) && !is_local_redirect(*url)) {
        return message(views_, 400, "Bad request", "Redirect target not allowed.");
    }
    return Response::redirect(*url);
}

Response Application::admin_panel(const Request& req) const
{
    auto session = current_session(req);
    auto caller = authenticate(db_, session);
    if (!caller) return redirect_to_login();
    if (caller->user.role != Role::Admin) return message(views_, 403, "Forbidden", "Administrators only.");

    std::string rows;
    for (const auto& u : load_users(db_)) {
        auto id = std::to_string(u.id);
        rows += "<tr><td>" + id + "</td><td>" + http::html_escape(u.username) + "</td><td>" +
                std::string(http::to_string(u.role)) +
                "</td><td><form method=\"post\" action=\"/admin/users.secu\">"
                "<input type=\"hidden\" name=\"action\" value=\"delete\">"
                "<input type=\"hidden\" name=\"id\" value=\"" +
                id + "\"><button type=\"submit\">Delete</button></form></td></tr>\n";
    }
    ModelAndView mv("admin");
    mv.add_object("announcement", announcement(db_)).add_raw("users", rows);
    return page("Administration", mv, session);
}

Response Application::admin_announce(const Request& req) const
{
    auto caller = authenticate(db_, current_session(req));
    if (!caller) return redirect_to_login();
    if (caller->user.role != Role::Admin) return message(views_, 403, "Forbidden", "Administrators only.");
    auto text = req.form_params.get("announcement");
    if (!text) return message(views_, 400, "Bad request", "announcement is required");
    db_.execute("INSERT OR REPLACE INTO SETTINGS (name, value) VALUES ('announcement', ?)", {*text});
    return Response::redirect("/admin.secu");
}

Response Application::admin_users(const Request& req) const
{
    auto caller = authenticate(db_, current_session(req));
    if (!caller) return redirect_to_login();
    if (!vulnerable(ids::kMissingAclAdmin) && caller->user.role != Role::Admin) {
        return message(views_, 403, "Forbidden", "Administrators only.");
    }

    if (req.form_params.get_or("action") != "delete") return message(views_, 400, "Bad request", "unknown action");
    std::vector<std::int64_t> targets;
    if (auto id = req.form_params.get("id")) {
        auto parsed = parse_int(*id);
        if (!parsed) return message(views_, 400, "Bad request", "id must be an integer");
        targets.push_back(*parsed);
    } else if (auto name = req.form_params.get("user")) {
        for (const auto& r : db_.query("SELECT ID FROM M_USER WHERE muname = ?", {*name})) {
            targets.push_back(std::stoll(r[0].value_or("0")));
        }
    } else {
        return message(views_, 400, "Bad request", "id or user is required");
    }

    int deleted = 0;
    for (auto id : targets) {
        db_.execute("DELETE FROM COMMENTS WHERE author_id = ?", {id});
        deleted += db_.execute("DELETE FROM M_USER WHERE ID = ?", {id});
    }
    return message(views_, 200, "Users", "Deleted " + std::to_string(deleted) + " user(s).");
}

Response Application::admin_report(const Request& req) const
{
    auto session = current_session(req);
    auto caller = authenticate(db_, session);
    if (!caller) return redirect_to_login();
    if (!vulnerable(ids::kMissingAclAdmin) && caller->user.role != Role::Admin) {
        return message(views_, 403, "Forbidden", "Administrators only.");
    }

    std::string rows;
    for (const auto& u : load_users(db_)) {
        std::vector<Row> counts;
        if (vulnerable(ids::kSecondOrderSqli)) {
            counts = db_.query(
                "SELECT COUNT(*) FROM COMMENTS c JOIN M_USER u ON u.ID = c.author_id WHERE u.muname = '" +
                u.username + "'");
        } else {
            counts = db_.query("SELECT COUNT(*) FROM COMMENTS WHERE author_id = ?", {u.id});
        }
        std::string cell;
        for (const auto& c : counts) {
            if (!cell.empty()) cell += ", ";
            cell += c[0].value_or("");
        }
        rows += "<tr><td>" + http::html_escape(u.username) + "</td><td>" + http::html_escape(cell) + "</td></tr>\n";
    }
    ModelAndView mv("report");
    mv.add_raw("rows", rows);
    return page("User report", mv, session);
}

Response Application::manager(const Request& req) const
{
    auto unauthorized = [&] {
        auto r = message(views_, 401, "Unauthorized", "Authentication required.");
        r.add_header("WWW-Authenticate", "Basic realm=\"BREW Manager\"");
        return r;
    };
    auto auth = req.header("Authorization");
    if (!auth || !auth->starts_with("Basic ")) return unauthorized();
    std::string decoded;
    try {
        decoded = crypto::base64_decode(std::string_view(*auth).substr(6));
    } catch (const std::invalid_argument&) {
        return unauthorized();
    }
    if (decoded != std::string(seed::kManagerUser) + ":" + std::string(seed::kManagerPassword)) return unauthorized();

    if (req.method == Method::Get) {
        ModelAndView mv("manager");
        mv.add_object("mode", std::string(vuln::to_string(config_.mode)));
        return page("Manager", mv, current_session(req));
    }

    auto action = req.form_params.get_or("action");
    if (action == "dump") {
        std::string dump = vuln::write_manifest(config_);
        dump += "\n# seed credentials\n";
        dump += "manager " + std::string(seed::kManagerUser) + ":" + std::string(seed::kManagerPassword) + "\n";
        for (const auto& u : make_seed(config_).users) {
            dump += "user " + u.username + " " + std::string(http::to_string(u.role)) + "\n";
        }
        dump += "verbose_errors " + std::string(verbose_errors() ? "on" : "off") + "\n";
        return Response::text(dump);
    }
    if (action == "verbose-toggle") {
        bool now = !verbose_errors();
        verbose_override_ = now ? 1 : 0;
        return Response::text(std::string("verbose errors ") + (now ? "on" : "off") + "\n");
    }
    if (action == "shutdown") {
        if (shutdown_hook_) {
            // Let the response go out before the listener stops.
            std::thread([hook = shutdown_hook_] {
                std::this_thread::sleep_for(std::chrono::milliseconds(100));
                hook();
            }).detach();
        }
        return Response::text("shutting down\n");
    }
    return message(views_, 400, "Bad request", "unknown action");
}

Response Application::register_form(const Request& req) const
{
    return page("Register", ModelAndView("register"), current_session(req));
}

Response Application::register_user(const Request& req) const
{
    auto username = req.form_params.get("username");
    auto password = req.form_params.get("password");
    if (!username || !password) return message(views_, 400, "Bad request", "username and password are required");
    auto fail = [&](std::string why) {
        ModelAndView mv("register");
        mv.add_object("error", std::move(why));
        return page("Register", mv, current_session(req));
    };
    if (username->empty() || username->size() > 128) return fail("Choose a name of 1 to 128 characters.");
    if (password->empty()) return fail("Choose a password.");
    if (!db_.query("SELECT ID FROM M_USER WHERE muname = ?", {*username}).empty()) return fail("That name is taken.");
    db_.execute("INSERT INTO M_USER (muname, mpwd, role) VALUES (?, ?, 'user')",
                {*username, crypto::hash_password(*password, hash_mode())});
    return Response::redirect("/login.secu");
}

Response Application::help(const Request& req) const
{
    return page("Help", ModelAndView("help"), current_session(req));
}

Response Application::static_asset(const Request& req) const
{
    auto name = req.path.substr(std::string_view("/static/").size());
    bool safe = !name.empty() && name.find("..") == std::string::npos && name.find('\\') == std::string::npos &&
                name.front() != '/';
    if (!safe) return message(views_, 404, "Not found", "No such asset.");

    if (options_.assets_dir) {
        auto path = *options_.assets_dir / name;
        std::ifstream in(path, std::ios::binary);
        if (in) {
            std::ostringstream ss;
            ss << in.rdbuf();
            Response r;
            r.body = ss.str();
            r.add_header("Content-Type", content_type_for(path));
            return r;
        }
    }
    if (name == "help.js") {
        Response r;
        r.body = help_script(vulnerable(ids::kDomXssHelp));
        r.add_header("Content-Type", "application/javascript");
        return r;
    }
    return message(views_, 404, "Not found", "No such asset.");
}

Response Application::hints(const Request& req) const
{
    auto id = req.path.substr(std::string_view("/__hints/").size());
    const auto* v = vuln::find(id);
    if (!v || !vulnerable(id)) return Response::text("no hints\n", 404);
    auto level = parse_int(req.query_params.get_or("level", "1"));
    if (!level || *level < 1 || *level > 3) return Response::text("level must be 1, 2 or 3\n", 400);
    return Response::text(v->hints[static_cast<std::size_t>(*level - 1)]);
}

Response Application::reseed_hook(const Request&) const
{
    reseed();
    return Response::text("reseeded\n");
}

}  // namespace brew::app
