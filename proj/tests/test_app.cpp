#include "brew/app.hpp"
#include "brew/harness.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace brew;
using brew::test::Client;

namespace {

namespace ids = vuln::ids;
namespace seed = app::seed;

vuln::BuildConfig only(std::initializer_list<std::string_view> list)
{
    vuln::BuildConfig c;
    for (auto id : list) c.enabled.insert(std::string(id));
    return c;
}

bool contains(const std::string& s, std::string_view needle) { return s.find(needle) != std::string::npos; }

std::vector<app::UserRecord> users(const app::Application& a) { return app::load_users(a.db()); }

std::string password_hash_of(const app::Application& a, std::int64_t id)
{
    for (const auto& u : users(a)) {
        if (u.id == id) return u.password_hash;
    }
    return {};
}

// Shared applications: fixed seeding runs PBKDF2, so build each variant once.
class AppTest : public ::testing::Test {
protected:
    static void SetUpTestSuite()
    {
        full_ = new app::Application(vuln::BuildConfig::full());
        fixed_ = new app::Application(vuln::BuildConfig::fixed());
    }
    static void TearDownTestSuite()
    {
        delete full_;
        delete fixed_;
    }
    void SetUp() override
    {
        full_->reseed();
        fixed_->reseed();
    }

    static app::Application* full_;
    static app::Application* fixed_;
};

app::Application* AppTest::full_ = nullptr;
app::Application* AppTest::fixed_ = nullptr;

}  // namespace

TEST(Seed, AdminRowAndDeterminism)
{
    auto cfg = vuln::BuildConfig::full();
    auto s1 = app::make_seed(cfg);
    auto s2 = app::make_seed(cfg);
    EXPECT_EQ(app::seed_sql(s1), app::seed_sql(s2));
    ASSERT_FALSE(s1.users.empty());
    EXPECT_EQ(s1.users[0].username, seed::kAdminUser);
    EXPECT_EQ(s1.users[0].role, http::Role::Admin);
    EXPECT_EQ(s1.users[0].password_hash, "0d107d09f5bbe40cade3de5c71e9e9b7");
    EXPECT_EQ(harness::crack_md5(s1.users[0].password_hash), seed::kAdminPasswordWeak);
}

TEST(Seed, FixedHashesAreSaltedAndVerify)
{
    auto s = app::make_seed(vuln::BuildConfig::fixed());
    for (const auto& u : s.users) EXPECT_TRUE(u.password_hash.starts_with(crypto::kPbkdf2Prefix)) << u.username;
    EXPECT_TRUE(crypto::verify_password(seed::kAdminPasswordStrong, s.users[0].password_hash));
    EXPECT_NE(s.users[1].password_hash.substr(0, 50), s.users[2].password_hash.substr(0, 50));
}

TEST(Seed, DoubleSeedGivesIdenticalTables)
{
    app::Database db;
    auto sd = app::make_seed(only({ids::kMd5AdminPass}));
    app::seed_database(db, sd);
    auto once = db.query("SELECT * FROM M_USER ORDER BY ID");
    auto comments_once = db.query("SELECT * FROM COMMENTS ORDER BY ID");
    app::seed_database(db, sd);
    EXPECT_EQ(db.query("SELECT * FROM M_USER ORDER BY ID"), once);
    EXPECT_EQ(db.query("SELECT * FROM COMMENTS ORDER BY ID"), comments_once);
}

TEST(Database, ErrorsCarryStatement)
{
    app::Database db;
    try {
        db.query("SELECT nosuch FROM nowhere");
        FAIL() << "expected DbError";
    } catch (const app::DbError& e) {
        EXPECT_TRUE(contains(e.what(), "SQL error: "));
        EXPECT_EQ(e.statement(), "SELECT nosuch FROM nowhere");
    }
}

TEST(Database, OnlyFirstStatementRuns)
{
    app::Database db;
    db.exec_script("CREATE TABLE t (x INTEGER); INSERT INTO t VALUES (1);");
    db.execute("UPDATE t SET x = 2; DROP TABLE t");
    EXPECT_EQ(db.query("SELECT x FROM t"), (std::vector<app::Row>{{"2"}}));
}

TEST(Helpers, LocalRedirect)
{
    EXPECT_TRUE(app::is_local_redirect("/home.secu"));
    EXPECT_TRUE(app::is_local_redirect("/comments.secu?offset=20"));
    EXPECT_FALSE(app::is_local_redirect("http://evil.example"));
    EXPECT_FALSE(app::is_local_redirect("//evil.example"));
    EXPECT_FALSE(app::is_local_redirect("/\\evil.example"));
    EXPECT_FALSE(app::is_local_redirect("/\r\nSet-Cookie: x"));
    EXPECT_FALSE(app::is_local_redirect(""));
    EXPECT_FALSE(app::is_local_redirect("home.secu"));
}

TEST(Helpers, StripScriptTagsIsNotEnough)
{
    EXPECT_EQ(app::strip_script_tags("a<script>x()</script>b"), "ab");
    EXPECT_TRUE(contains(app::strip_script_tags("<img src=x onerror=f()>"), "onerror"));
}

TEST(Helpers, HelpScriptVariants)
{
    EXPECT_TRUE(contains(app::help_script(true), "innerHTML"));
    EXPECT_FALSE(contains(app::help_script(false), "innerHTML"));
    EXPECT_TRUE(contains(app::help_script(false), "textContent"));
}

TEST(ApplicationConfig, RejectsUnresolvedOrUnknownSelections)
{
    EXPECT_THROW(app::Application(only({ids::kWeakSession})), http::ConfigError);
    EXPECT_THROW(app::Application(only({"nosuch"})), http::ConfigError);
}

TEST_F(AppTest, UnknownPageIs404)
{
    Client c(*full_);
    EXPECT_EQ(c.get("/nosuchpage.secu").status, 404);
}

TEST_F(AppTest, SearchEchoes)
{
    for (auto* a : {full_, fixed_}) {
        Client c(*a);
        auto r = c.post("/search.secu", {{"search", "hello"}});
        EXPECT_EQ(r.status, 200);
        EXPECT_TRUE(contains(r.body, "hello"));
        EXPECT_TRUE(contains(c.post("/search.secu", {{"search", "abc"}}).body, "abc"));
    }
}

TEST_F(AppTest, SearchReflectsRawWhenVulnerable)
{
    Client v(*full_);
    EXPECT_TRUE(contains(v.post("/search.secu", {{"search", "<script>x()</script>"}}).body, "<script>x()</script>"));
    Client f(*fixed_);
    auto body = f.post("/search.secu", {{"search", "<script>x()</script>"}}).body;
    EXPECT_TRUE(contains(body, "&lt;script&gt;"));
    EXPECT_FALSE(contains(body, "<script>x()"));
}

TEST_F(AppTest, LoginSetsCookie)
{
    Client c(*fixed_);
    auto r = c.login(seed::kAliceUser, seed::kAlicePassword);
    EXPECT_EQ(r.status, 302);
    EXPECT_EQ(r.header("Location"), "/home.secu");
    auto cookie = r.header("Set-Cookie").value_or("");
    EXPECT_TRUE(cookie.starts_with("BREWSESSION="));
    EXPECT_TRUE(contains(cookie, "HttpOnly"));
    EXPECT_TRUE(contains(c.get("/home.secu").body, "<span class=\"user\">alice</span>"));
}

TEST_F(AppTest, LoginFailures)
{
    Client c(*fixed_);
    auto bad = c.login(seed::kAliceUser, "wrong");
    EXPECT_EQ(bad.status, 200);
    EXPECT_TRUE(contains(bad.body, "Invalid username or password."));
    EXPECT_EQ(c.post("/login.secu", {{"username", "alice"}}).status, 400);
    EXPECT_EQ(c.get("/home.secu").status, 302);
}

TEST_F(AppTest, WeakSessionTokensAreConsecutive)
{
    Client a(*full_), b(*full_);
    auto ta = a.login(seed::kAliceUser, seed::kAlicePassword).header("Set-Cookie").value_or("");
    auto tb = b.login(seed::kBobUser, seed::kBobPassword).header("Set-Cookie").value_or("");
    auto t1 = std::stoul(a.session_id().value(), nullptr, 16);
    auto t2 = std::stoul(b.session_id().value(), nullptr, 16);
    EXPECT_EQ(t2, t1 + 1);
    EXPECT_EQ(a.session_id()->size(), 8u);
    EXPECT_FALSE(contains(ta, "HttpOnly"));
}

TEST_F(AppTest, WeakSessionKeepsPreLoginId)
{
    Client c(*full_);
    c.get("/login.secu");
    auto before = c.session_id().value();
    c.login(seed::kAliceUser, seed::kAlicePassword);
    EXPECT_EQ(c.session_id().value(), before);
}

TEST_F(AppTest, FixedSessionRotatesAtLogin)
{
    Client c(*fixed_);
    c.get("/login.secu");
    auto before = c.session_id().value();
    c.login(seed::kAliceUser, seed::kAlicePassword);
    EXPECT_NE(c.session_id().value(), before);
    EXPECT_EQ(c.session_id()->size(), 32u);
    EXPECT_FALSE(fixed_->sessions().find(before));
}

TEST_F(AppTest, LogoutEndsSession)
{
    Client c(*fixed_);
    c.login(seed::kAliceUser, seed::kAlicePassword);
    auto sid = c.session_id().value();
    EXPECT_EQ(c.get("/logout.secu").status, 302);
    EXPECT_FALSE(fixed_->sessions().find(sid));
}

TEST_F(AppTest, ProfileUpdateOwnRowBothModes)
{
    for (auto* a : {full_, fixed_}) {
        Client c(*a);
        c.login(seed::kAdminUser, a == full_ ? seed::kAdminPasswordWeak : seed::kAdminPasswordStrong);
        auto before = users(*a);
        auto form = c.get("/profile.secu").body;
        test::Form f{{"uid", "1"}, {"uname", "alice"}, {"upwd", "h"}};
        if (a == fixed_) {
            auto p = form.find("name=\"csrf\" value=\"");
            ASSERT_NE(p, std::string::npos);
            p += 19;
            f.push_back({"csrf", form.substr(p, form.find('"', p) - p)});
        }
        EXPECT_EQ(c.post("/profile.secu", f).status, 200);
        auto after = users(*a);
        ASSERT_EQ(after.size(), before.size());
        for (std::size_t i = 0; i < after.size(); ++i) {
            if (after[i].id == 1) {
                EXPECT_EQ(after[i].username, "alice");
                EXPECT_TRUE(crypto::verify_password("h", after[i].password_hash));
            } else {
                EXPECT_EQ(after[i].username, before[i].username);
                EXPECT_EQ(after[i].password_hash, before[i].password_hash);
            }
        }
    }
}

TEST_F(AppTest, ProfileInjectionRewritesEveryRow)
{
    Client c(*full_);
    c.login(seed::kAdminUser, seed::kAdminPasswordWeak);
    c.post("/profile.secu", {{"uid", "1 OR 1=1"}, {"uname", "x"}, {"upwd", "p"}});
    auto rows = full_->db().query("SELECT COUNT(*) FROM M_USER WHERE muname = 'x' AND mpwd = ?",
                                  {crypto::md5_hex("p")});
    EXPECT_EQ(rows.at(0).at(0), std::to_string(app::make_seed(full_->config()).users.size()));
}

TEST_F(AppTest, ProfileInjectionRejectedWhenFixed)
{
    Client c(*fixed_);
    c.login(seed::kAdminUser, seed::kAdminPasswordStrong);
    auto form = c.get("/profile.secu").body;
    auto p = form.find("name=\"csrf\" value=\"") + 19;
    auto token = form.substr(p, form.find('"', p) - p);
    auto before = users(*fixed_);
    auto r = c.post("/profile.secu", {{"uid", "1 OR 1=1"}, {"uname", "x"}, {"upwd", "p"}, {"csrf", token}});
    EXPECT_EQ(r.status, 400);
    auto after = users(*fixed_);
    ASSERT_EQ(after.size(), before.size());
    for (std::size_t i = 0; i < after.size(); ++i) {
        EXPECT_EQ(after[i].username, before[i].username);
        EXPECT_EQ(after[i].password_hash, before[i].password_hash);
    }
}

TEST_F(AppTest, FixedProfileNeverChangesMoreThanOneRow)
{
    Client c(*fixed_);
    c.login(seed::kAliceUser, seed::kAlicePassword);
    auto form = c.get("/profile.secu").body;
    auto p = form.find("name=\"csrf\" value=\"") + 19;
    auto token = form.substr(p, form.find('"', p) - p);
    const std::vector<std::string> fragments = {"2", "3", "1", " OR 1=1", "--", "'", ";", " ", "0x2", "2 ", "-1", "+2",
                                                "AND", "ID", "(", ")", "/*", "*/", "\"", "999999999999999999999"};
    std::mt19937 rng(3);
    std::uniform_int_distribution<std::size_t> pick(0, fragments.size() - 1);
    for (int i = 0; i < 60; ++i) {
        std::string uid;
        for (int j = 0; j < 3; ++j) uid += fragments[pick(rng)];
        auto before = users(*fixed_);
        c.post("/profile.secu", {{"uid", uid}, {"uname", "alice"}, {"upwd", "wonderland"}, {"csrf", token}});
        auto after = users(*fixed_);
        ASSERT_EQ(after.size(), before.size());
        int changed = 0;
        for (std::size_t k = 0; k < after.size(); ++k) {
            if (after[k].password_hash != before[k].password_hash || after[k].username != before[k].username) ++changed;
            if (after[k].id != seed::kAliceId) EXPECT_EQ(after[k].password_hash, before[k].password_hash) << uid;
        }
        EXPECT_LE(changed, 1) << uid;
    }
}

TEST_F(AppTest, CsrfTokenRequiredWhenFixed)
{
    Client c(*fixed_);
    c.login(seed::kAliceUser, seed::kAlicePassword);
    auto r = c.post("/profile.secu", {{"uid", "2"}, {"uname", "alice"}, {"upwd", "z"}});
    EXPECT_EQ(r.status, 403);
    r = c.post("/profile.secu", {{"uid", "2"}, {"uname", "alice"}, {"upwd", "z"}, {"csrf", "forged"}});
    EXPECT_EQ(r.status, 403);
    EXPECT_TRUE(crypto::verify_password(seed::kAlicePassword, password_hash_of(*fixed_, seed::kAliceId)));
}

TEST_F(AppTest, CsrfFormHasNoTokenWhenVulnerable)
{
    Client c(*full_);
    c.login(seed::kAliceUser, seed::kAlicePassword);
    EXPECT_FALSE(contains(c.get("/profile.secu").body, "name=\"csrf\""));
    EXPECT_EQ(c.post("/profile.secu", {{"uid", "2"}, {"uname", "alice"}, {"upwd", "z"}}).status, 200);
    EXPECT_EQ(password_hash_of(*full_, seed::kAliceId), crypto::md5_hex("z"));
}

TEST_F(AppTest, PlainUserCannotEditOthers)
{
    for (auto* a : {full_, fixed_}) {
        Client c(*a);
        c.login(seed::kAliceUser, seed::kAlicePassword);
        auto form = c.get("/profile.secu").body;
        test::Form f{{"uid", "3"}, {"uname", "bob"}, {"upwd", "z"}};
        if (a == fixed_) {
            auto p = form.find("name=\"csrf\" value=\"") + 19;
            f.push_back({"csrf", form.substr(p, form.find('"', p) - p)});
        }
        EXPECT_EQ(c.post("/profile.secu", f).status, 403);
    }
}

TEST_F(AppTest, Md5DebugCommentOnlyWhenVulnerable)
{
    Client v(*full_);
    v.login(seed::kAliceUser, seed::kAlicePassword);
    EXPECT_TRUE(contains(v.get("/home.secu").body, "<!-- debug: uid=1 mpwd=0d107d09f5bbe40cade3de5c71e9e9b7 -->"));
    Client f(*fixed_);
    f.login(seed::kAliceUser, seed::kAlicePassword);
    EXPECT_FALSE(contains(f.get("/home.secu").body, "debug"));
}

TEST_F(AppTest, AdminPanelRequiresAdmin)
{
    Client admin(*fixed_);
    admin.login(seed::kAdminUser, seed::kAdminPasswordStrong);
    auto r = admin.get("/admin.secu");
    EXPECT_EQ(r.status, 200);
    EXPECT_TRUE(contains(r.body, "/admin/users.secu"));
    Client user(*full_);
    user.login(seed::kAliceUser, seed::kAlicePassword);
    EXPECT_EQ(user.get("/admin.secu").status, 403);
}

TEST_F(AppTest, AnnouncementIsEscaped)
{
    Client admin(*full_);
    admin.login(seed::kAdminUser, seed::kAdminPasswordWeak);
    EXPECT_EQ(admin.post("/admin.secu", {{"announcement", "<b>exam</b>"}}).status, 302);
    auto home = admin.get("/home.secu").body;
    EXPECT_TRUE(contains(home, "&lt;b&gt;exam&lt;/b&gt;"));
}

TEST_F(AppTest, UserDeletionAcl)
{
    Client v(*full_);
    v.login(seed::kAliceUser, seed::kAlicePassword);
    EXPECT_EQ(v.post("/admin/users.secu", {{"action", "delete"}, {"id", "3"}}).status, 200);
    EXPECT_TRUE(full_->db().query("SELECT ID FROM M_USER WHERE ID = 3").empty());

    Client f(*fixed_);
    f.login(seed::kAliceUser, seed::kAlicePassword);
    EXPECT_EQ(f.post("/admin/users.secu", {{"action", "delete"}, {"id", "3"}}).status, 403);
    EXPECT_EQ(fixed_->db().query("SELECT ID FROM M_USER WHERE ID = 3").size(), 1u);
}

TEST_F(AppTest, ManagerConsole)
{
    auto basic = [](std::string_view cred) {
        return http::HeaderMap{{"Authorization", "Basic " + crypto::base64_encode(cred)}};
    };
    Client c(*full_);
    EXPECT_EQ(c.get("/manager.secu", basic("admin:admin")).status, 200);
    auto denied = c.get("/manager.secu", basic("admin:wrong"));
    EXPECT_EQ(denied.status, 401);
    EXPECT_TRUE(denied.header("WWW-Authenticate").has_value());
    EXPECT_EQ(c.get("/manager.secu").status, 401);
    auto dump = c.post("/manager.secu", {{"action", "dump"}}, basic("admin:admin"));
    EXPECT_EQ(dump.status, 200);
    EXPECT_TRUE(contains(dump.body, "vuln second-order-sqli"));

    Client f(*fixed_);
    EXPECT_EQ(f.get("/manager.secu", basic("admin:admin")).status, 404);
    EXPECT_EQ(f.post("/manager.secu", {{"action", "dump"}}, basic("admin:admin")).status, 404);
}

TEST_F(AppTest, ManagerTogglesVerboseErrors)
{
    auto auth = http::HeaderMap{{"Authorization", "Basic " + crypto::base64_encode("admin:admin")}};
    Client c(*full_);
    EXPECT_TRUE(full_->verbose_errors());
    c.post("/manager.secu", {{"action", "verbose-toggle"}}, auth);
    EXPECT_FALSE(full_->verbose_errors());
    EXPECT_EQ(c.get("/comments.secu?offset=abc").body, http::kGenericErrorPage);
    full_->reseed();
    EXPECT_TRUE(full_->verbose_errors());
}

TEST_F(AppTest, OpenRedirect)
{
    Client v(*full_);
    auto r = v.get("/redirect.secu?url=http%3A%2F%2Fevil.example");
    EXPECT_EQ(r.status, 302);
    EXPECT_EQ(r.header("Location"), "http://evil.example");

    Client f(*fixed_);
    EXPECT_EQ(f.get("/redirect.secu?url=http%3A%2F%2Fevil.example").status, 400);
    auto ok = f.get("/redirect.secu?url=%2Fhome.secu");
    EXPECT_EQ(ok.status, 302);
    EXPECT_EQ(ok.header("Location"), "/home.secu");
    EXPECT_EQ(f.get("/redirect.secu").status, 400);
}

TEST_F(AppTest, Comments)
{
    for (auto* a : {full_, fixed_}) {
        Client c(*a);
        c.login(seed::kBobUser, seed::kBobPassword);
        EXPECT_EQ(c.post("/comments.secu", {{"body", "nice"}}).status, 302);
        EXPECT_TRUE(contains(c.get("/comments.secu").body, "nice"));
    }
    Client anon(*full_);
    EXPECT_EQ(anon.post("/comments.secu", {{"body", "x"}}).status, 302);
}

TEST_F(AppTest, StoredXss)
{
    const std::string payload = "<img src=x onerror=f()>";
    Client v(*full_);
    v.login(seed::kBobUser, seed::kBobPassword);
    v.post("/comments.secu", {{"body", payload}});
    EXPECT_TRUE(contains(v.get("/comments.secu").body, payload));

    Client f(*fixed_);
    f.login(seed::kBobUser, seed::kBobPassword);
    f.post("/comments.secu", {{"body", payload}});
    auto body = f.get("/comments.secu").body;
    EXPECT_FALSE(contains(body, payload));
    EXPECT_TRUE(contains(body, "&lt;img src=x onerror=f()&gt;"));
}

TEST_F(AppTest, VerboseErrorTrigger)
{
    Client v(*full_);
    auto r = v.get("/comments.secu?offset=abc");
    EXPECT_EQ(r.status, 500);
    EXPECT_TRUE(contains(r.body, "SQL error: datatype mismatch"));
    EXPECT_TRUE(contains(r.body, "LIMIT 20 OFFSET ?"));

    Client f(*fixed_);
    auto g = f.get("/comments.secu?offset=abc");
    EXPECT_EQ(g.status, 500);
    EXPECT_EQ(g.body, http::kGenericErrorPage);
}

TEST_F(AppTest, ReportBenignCounts)
{
    Client c(*fixed_);
    c.login(seed::kAdminUser, seed::kAdminPasswordStrong);
    auto body = c.get("/admin/report.secu").body;
    auto expected = fixed_->db().query(
        "SELECT u.muname, COUNT(c.ID) FROM M_USER u LEFT JOIN COMMENTS c ON c.author_id = u.ID GROUP BY u.ID");
    ASSERT_FALSE(expected.empty());
    for (const auto& row : expected) {
        EXPECT_TRUE(contains(body, "<tr><td>" + *row[0] + "</td><td>" + *row[1] + "</td></tr>")) << *row[0];
    }
}

TEST_F(AppTest, SecondOrderInjection)
{
    const std::string name = "so1' UNION SELECT mpwd FROM M_USER WHERE role='admin";
    for (auto* a : {full_, fixed_}) {
        Client c(*a);
        EXPECT_EQ(c.post("/register.secu", {{"username", name}, {"password", "pw"}}).status, 302);
        c.login(name, "pw");
        auto r = c.get("/admin/report.secu");
        if (a == full_) {
            EXPECT_EQ(r.status, 200);
            EXPECT_TRUE(contains(r.body, "0d107d09f5bbe40cade3de5c71e9e9b7"));
        } else {
            EXPECT_EQ(r.status, 403);
            Client admin(*a);
            admin.login(seed::kAdminUser, seed::kAdminPasswordStrong);
            auto body = admin.get("/admin/report.secu").body;
            EXPECT_TRUE(contains(body, "<tr><td>" + http::html_escape(name) + "</td><td>0</td></tr>"));
            EXPECT_FALSE(contains(body, "pbkdf2"));
        }
    }
}

TEST_F(AppTest, Registration)
{
    Client c(*fixed_);
    EXPECT_EQ(c.post("/register.secu", {{"username", "carol"}, {"password", "pw"}}).status, 302);
    EXPECT_TRUE(contains(c.post("/register.secu", {{"username", "carol"}, {"password", "x"}}).body, "taken"));
    EXPECT_TRUE(contains(c.post("/register.secu", {{"username", ""}, {"password", "x"}}).body, "1 to 128"));
    EXPECT_EQ(c.login("carol", "pw").status, 302);
}

TEST_F(AppTest, HelpPageAndScript)
{
    Client v(*full_), f(*fixed_);
    EXPECT_TRUE(contains(v.get("/help.secu").body, "/static/help.js"));
    EXPECT_TRUE(contains(v.get("/static/help.js").body, "innerHTML"));
    EXPECT_TRUE(contains(f.get("/static/help.js").body, "textContent"));
    EXPECT_EQ(f.get("/static/..%2Fseed.sql").status, 404);
    EXPECT_EQ(f.get("/static/nosuch.js").status, 404);
}

TEST_F(AppTest, HintsEndpoint)
{
    Client v(*full_);
    const auto* entry = vuln::find(ids::kXssSearch);
    EXPECT_EQ(v.get("/__hints/xss-search").body, entry->hints[0]);
    EXPECT_EQ(v.get("/__hints/xss-search?level=3").body, entry->hints[2]);
    EXPECT_EQ(v.get("/__hints/xss-search?level=4").status, 400);
    EXPECT_EQ(v.get("/__hints/xss-search?level=x").status, 400);
    EXPECT_EQ(v.get("/__hints/nosuch").status, 404);
    Client f(*fixed_);
    EXPECT_EQ(f.get("/__hints/xss-search").status, 404);
    EXPECT_TRUE(contains(v.get("/").body, "/static/hints.js"));
}

TEST_F(AppTest, ReseedRestoresState)
{
    Client c(*full_);
    c.login(seed::kAliceUser, seed::kAlicePassword);
    c.post("/admin/users.secu", {{"action", "delete"}, {"id", "3"}});
    EXPECT_EQ(users(*full_).size(), 2u);
    EXPECT_EQ(c.post("/__reseed", {}).status, 200);
    EXPECT_EQ(users(*full_).size(), 3u);
    EXPECT_EQ(full_->sessions().size(), 0u);
}

TEST(Blackbox, NoHintsOrReseed)
{
    app::Application a(vuln::BuildConfig::full(vuln::DeployMode::Blackbox));
    Client c(a);
    EXPECT_EQ(c.get("/__hints/xss-search").status, 404);
    EXPECT_EQ(c.post("/__reseed", {}).status, 404);
    EXPECT_FALSE(contains(c.get("/").body, "hints.js"));
    for (const auto& r : a.router().routes()) {
        EXPECT_FALSE(r.pattern.starts_with("/__")) << r.pattern;
    }
}

TEST(Blackbox, FaultInjectionUsesGenericPage)
{
    app::Application a(vuln::BuildConfig::fixed(vuln::DeployMode::Blackbox));
    a.add_route("/fault.secu", http::Method::Get, "fault",
                [](const http::Request&) -> http::Response { throw std::logic_error("internal state"); });
    Client c(a);
    auto r = c.get("/fault.secu");
    EXPECT_EQ(r.status, 500);
    EXPECT_EQ(r.body, http::kGenericErrorPage);
}

TEST(HintHygiene, HintsNeverContainPayloads)
{
    for (const auto& v : vuln::catalog()) {
        for (const auto& p : harness::payloads(v.id)) {
            for (const auto& h : v.hints) EXPECT_FALSE(contains(h, p)) << v.id << ": " << p;
        }
    }
}
