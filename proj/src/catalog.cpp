#include "brew/catalog.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace brew::vuln {

std::string_view to_string(Stage s)
{
    static constexpr std::string_view kNames[] = {"C1", "C2", "C3", "C4"};
    return kNames[static_cast<int>(s) - 1];
}

std::string_view to_string(FlawClass f)
{
    static constexpr std::string_view kNames[] = {"F1", "F2", "F3", "F4"};
    return kNames[static_cast<int>(f) - 1];
}

std::string_view to_string(OwaspCategory a)
{
    static constexpr std::string_view kNames[] = {"A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "A9", "A10"};
    return kNames[static_cast<int>(a) - 1];
}

std::string_view describe(FlawClass f)
{
    switch (f) {
    case FlawClass::F1: return "Bad programming style";
    case FlawClass::F2: return "Design and architecture flaws";
    case FlawClass::F3: return "Wrong implementation of basic concepts";
    case FlawClass::F4: return "Vulnerable environment";
    }
    return {};
}

std::string_view describe(OwaspCategory a)
{
    switch (a) {
    case OwaspCategory::A1: return "Injection attacks";
    case OwaspCategory::A2: return "Broken Authentication and Session Management";
    case OwaspCategory::A3: return "Cross Site Scripting";
    case OwaspCategory::A4: return "Insecure Direct Object References";
    case OwaspCategory::A5: return "Security Misconfiguration";
    case OwaspCategory::A6: return "Sensitive Data Exposure";
    case OwaspCategory::A7: return "Missing Function Level Access Control";
    case OwaspCategory::A8: return "Cross Site Request Forgery";
    case OwaspCategory::A9: return "Components with Known Vulnerabilities";
    case OwaspCategory::A10: return "Unvalidated Redirects and Forwards";
    }
    return {};
}

namespace {

template <typename E, int N>
std::optional<E> parse_enum(std::string_view s)
{
    for (int i = 1; i <= N; ++i) {
        auto e = static_cast<E>(i);
        if (to_string(e) == s) return e;
    }
    return std::nullopt;
}

}  // namespace

std::optional<Stage> parse_stage(std::string_view s) { return parse_enum<Stage, 4>(s); }
std::optional<FlawClass> parse_flaw(std::string_view s) { return parse_enum<FlawClass, 4>(s); }
std::optional<OwaspCategory> parse_owasp(std::string_view s) { return parse_enum<OwaspCategory, 10>(s); }

namespace {

std::vector<VulnerabilityDescriptor> build_catalog()
{
    using enum Stage;
    using enum FlawClass;
    using enum OwaspCategory;
    std::vector<VulnerabilityDescriptor> cat = {
        {std::string(ids::kXssSearch), "Reflected XSS in the search page", C1, F1, A3, {"/search.secu"},
         "The search controller hands the search term to the view as an unescaped model value, so markup in the "
         "term is reflected into the result page.",
         {"Look at what the search page does with the text you type.",
          "Compare the page source with your input when the input contains HTML metacharacters.",
          "The searchString model value reaches the search view without HTML escaping."}},
        {std::string(ids::kOpenRedirect), "Open redirect", C1, F1, A10, {"/redirect.secu"},
         "The redirect endpoint copies its url parameter into the Location header without validation.",
         {"Some links on the site bounce through an intermediate page.",
          "Check which destinations the redirect endpoint is willing to send you to.",
          "The url parameter of /redirect.secu is not checked against the site's own origin."}},
        {std::string(ids::kVerboseErrors), "Verbose error pages", C1, F4, A6, {"/comments.secu"},
         "Unhandled exceptions are rendered with their internal message, including the failing SQL statement.",
         {"Try to make the application fail.",
          "Send parameters of the wrong type to pages that take numeric input.",
          "A non-numeric page number on the comment listing produces a database error page."}},
        {std::string(ids::kCsrfProfile), "CSRF on profile update", C2, F2, A8, {"/profile.secu"},
         "The profile update accepts any well-formed POST from an authenticated browser; no per-session token "
         "ties the request to the application's own form.",
         {"Think about who can cause your browser to submit the profile form.",
          "Inspect the profile form for anything that would be hard for another site to guess.",
          "The profile update carries no synchronizer token, so a cross-site form post is accepted."}},
        {std::string(ids::kDefaultManagerCreds), "Management console with default credentials", C2, F4, A5,
         {"/manager.secu"},
         "The management console of the embedded server is reachable and still protected by its factory "
         "credentials.",
         {"Servers often ship with administration tools.",
          "Look for a management page and the vendor documentation for its login.",
          "The console at /manager.secu uses the documented factory login."}},
        {std::string(ids::kMd5AdminPass), "Unsalted MD5 password storage", C2, F3, A6, {"/login.secu", "/home.secu"},
         "Passwords are stored as unsalted MD5 digests, the administrator chose a dictionary word, and the home "
         "page leaks the stored digests in a leftover debug comment.",
         {"How are passwords kept by this application?",
          "Read the HTML source of the pages you see after logging in.",
          "The member list exposes unsalted MD5 digests; a precomputed table reverses weak ones."}},
        {std::string(ids::kSqliProfile), "SQL injection in profile update", C2, F1, A1, {"/profile.secu"},
         "The profile UPDATE binds the name and password as parameters but appends the uid form field to the "
         "WHERE clause by string concatenation.",
         {"Not every field of the profile form is treated the same way.",
          "The hidden uid field ends up in a database statement.",
          "uid is concatenated after 'where ID = ', so boolean SQL in it changes which rows are updated."}},
        {std::string(ids::kDomXssHelp), "DOM-based XSS in the help page", C3, F1, A3, {"/help.secu"},
         "The help page script writes the URL fragment into the document as markup.",
         {"The help page reacts to something in its address.",
          "Read the client-side script that selects the help topic.",
          "The fragment after '#' is assigned to an element's HTML, not to its text."}},
        {std::string(ids::kMissingAclAdmin), "Missing access check on user deletion", C3, F2, A7,
         {"/admin/users.secu", "/admin/report.secu"},
         "Access checks are written per function. The admin panel checks the role; the user deletion endpoint "
         "and the report page do not.",
         {"The admin panel is protected. Is everything behind it?",
          "Find the endpoints the admin panel's forms post to.",
          "/admin/users.secu performs deletions without checking the caller's role."}},
        {std::string(ids::kStoredXssComments), "Stored XSS in comments", C3, F2, A3, {"/comments.secu"},
         "Comment bodies are stored verbatim and rendered into the comment list without escaping.",
         {"What you write is shown to others.",
          "Check how the comment listing renders special characters in stored comments.",
          "Comment bodies are inserted into the listing as raw HTML."}},
        {std::string(ids::kWeakSession), "Predictable session identifiers and fixation", C3, F3, A2, {"/login.secu"},
         "Session identifiers come from a counter, the cookie lacks HttpOnly, and the pre-login identifier is "
         "kept after authentication.",
         {"Log in a few times and look at what identifies you.",
          "Compare the session cookies you receive across logins and before/after login.",
          "BREWSESSION is an incrementing hexadecimal counter and is not rotated on login."}},
        {std::string(ids::kSecondOrderSqli), "Second-order SQL injection in the user report", C4, F1, A1,
         {"/register.secu", "/admin/report.secu"},
         "Sealed challenge.",
         {"Data you store can be used later somewhere else.",
          "Some pages are built from other users' account data.",
          "Consider what the report page does with account names."},
         true},
    };
    std::stable_sort(cat.begin(), cat.end(), [](const auto& a, const auto& b) {
        if (a.stage != b.stage) return a.stage < b.stage;
        return a.id < b.id;
    });
    return cat;
}

}  // namespace

const std::vector<VulnerabilityDescriptor>& catalog()
{
    static const auto cat = build_catalog();
    return cat;
}

const VulnerabilityDescriptor* find(std::string_view id, std::span<const VulnerabilityDescriptor> cat)
{
    for (const auto& v : cat) {
        if (v.id == id) return &v;
    }
    return nullptr;
}

namespace {

template <typename Pred>
std::vector<VulnerabilityDescriptor> filter_by(std::span<const VulnerabilityDescriptor> cat, Pred pred)
{
    std::vector<VulnerabilityDescriptor> out;
    std::copy_if(cat.begin(), cat.end(), std::back_inserter(out), pred);
    return out;
}

}  // namespace

std::vector<VulnerabilityDescriptor> filter(Stage s, std::span<const VulnerabilityDescriptor> cat)
{
    return filter_by(cat, [s](const auto& v) { return v.stage == s; });
}

std::vector<VulnerabilityDescriptor> filter(FlawClass f, std::span<const VulnerabilityDescriptor> cat)
{
    return filter_by(cat, [f](const auto& v) { return v.flaw_class == f; });
}

std::vector<VulnerabilityDescriptor> filter(OwaspCategory a, std::span<const VulnerabilityDescriptor> cat)
{
    return filter_by(cat, [a](const auto& v) { return v.owasp == a; });
}

IdSet resolve_selection(const IdSet& requested, std::span<const VulnerabilityDescriptor> cat)
{
    bool any_c3 = false;
    bool any_c4 = false;
    for (const auto& id : requested) {
        const auto* v = find(id, cat);
        if (!v) throw SelectionError("unknown vulnerability id '" + id + "'");
        any_c3 |= v->stage == Stage::C3;
        any_c4 |= v->stage == Stage::C4;
    }
    IdSet out = requested;
    // Both rules only add C1/C2 (R2) or everything (R3), so one pass reaches the fixpoint.
    for (const auto& v : cat) {
        if (any_c4 || (any_c3 && v.stage <= Stage::C2)) out.insert(v.id);
    }
    return out;
}

bool satisfies_stage_rules(const IdSet& enabled, std::span<const VulnerabilityDescriptor> cat)
{
    auto has_stage = [&](Stage s) {
        return std::any_of(cat.begin(), cat.end(),
                           [&](const auto& v) { return v.stage == s && enabled.contains(v.id); });
    };
    auto all_of_pred = [&](auto pred) {
        return std::all_of(cat.begin(), cat.end(), [&](const auto& v) { return !pred(v) || enabled.contains(v.id); });
    };
    if (has_stage(Stage::C3) && !all_of_pred([](const auto& v) { return v.stage <= Stage::C2; })) return false;
    if (has_stage(Stage::C4) && !all_of_pred([](const auto&) { return true; })) return false;
    return true;
}

std::vector<std::string> ordered(const IdSet& ids, std::span<const VulnerabilityDescriptor> cat)
{
    std::vector<std::string> out;
    for (const auto& v : cat) {
        if (ids.contains(v.id)) out.push_back(v.id);
    }
    return out;
}

std::string_view to_string(DeployMode m) { return m == DeployMode::Whitebox ? "whitebox" : "blackbox"; }

std::optional<DeployMode> parse_mode(std::string_view s)
{
    if (s == "whitebox") return DeployMode::Whitebox;
    if (s == "blackbox") return DeployMode::Blackbox;
    return std::nullopt;
}

BuildConfig BuildConfig::from_selection(const IdSet& requested, DeployMode mode, int port)
{
    return BuildConfig{resolve_selection(requested), mode, port};
}

BuildConfig BuildConfig::full(DeployMode mode)
{
    IdSet all;
    for (const auto& v : catalog()) all.insert(v.id);
    return BuildConfig{std::move(all), mode, kDefaultPort};
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::string_view strip(std::string_view s)
{
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

}  // namespace

ManifestResult validate_manifest(std::string_view text)
{
    ManifestResult result;
    BuildConfig cfg;
    IdSet requested;
    bool seen_mode = false;
    bool seen_port = false;
    int line_no = 0;

    auto error = [&](const std::string& msg) { result.errors.push_back("line " + std::to_string(line_no) + ": " + msg); };

    while (!text.empty()) {
        auto nl = text.find('\n');
        auto raw = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;

        auto line = strip(raw);
        if (line.empty() || line.front() == '#') continue;

        auto sp = line.find_first_of(" \t");
        auto directive = line.substr(0, sp);
        auto arg = sp == std::string_view::npos ? std::string_view{} : strip(line.substr(sp));
        if (arg.find_first_of(" \t") != std::string_view::npos) {
            error("too many arguments to '" + std::string(directive) + "'");
            continue;
        }

        if (directive == "mode") {
            if (seen_mode) {
                error("duplicate 'mode' directive");
            } else if (auto m = parse_mode(arg)) {
                cfg.mode = *m;
            } else {
                error("unknown mode '" + std::string(arg) + "'");
            }
            seen_mode = true;
        } else if (directive == "port") {
            int port = 0;
            auto [p, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), port);
            if (seen_port) {
                error("duplicate 'port' directive");
            } else if (arg.empty() || ec != std::errc{} || p != arg.data() + arg.size() || port < 1 || port > 65535) {
                error("invalid port '" + std::string(arg) + "'");
            } else {
                cfg.port = port;
            }
            seen_port = true;
        } else if (directive == "vuln") {
            if (arg.empty()) {
                error("missing vulnerability id");
            } else if (!find(arg)) {
                error("unknown vulnerability id '" + std::string(arg) + "'");
            } else {
                requested.insert(std::string(arg));
            }
        } else {
            error("unknown directive '" + std::string(directive) + "'");
        }
    }

    if (!result.errors.empty()) return result;

    cfg.enabled = resolve_selection(requested);
    for (const auto& id : ordered(cfg.enabled)) {
        if (!requested.contains(id)) result.notices.push_back("added '" + id + "' (required by stage dependencies)");
    }
    result.config = std::move(cfg);
    return result;
}

std::string write_manifest(const BuildConfig& config)
{
    std::ostringstream out;
    out << "# resolved build manifest\n";
    out << "mode " << to_string(config.mode) << "\n";
    out << "port " << config.port << "\n";
    for (const auto& id : ordered(config.enabled)) out << "vuln " << id << "\n";
    return out.str();
}

}  // namespace brew::vuln
