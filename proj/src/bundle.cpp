#include "brew/bundle.hpp"

#include "brew/crypto.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace brew::dist {

namespace ids = vuln::ids;

namespace {

// Reference fixes, keyed by catalog id.
const std::map<std::string, std::string, std::less<>>& reference_fixes()
{
    static const std::map<std::string, std::string, std::less<>> fixes = {
        {std::string(ids::kXssSearch),
         "Add searchString to the model with HTML escaping (`mv.add_object`) instead of `mv.add_raw`."},
        {std::string(ids::kOpenRedirect),
         "Only redirect to same-origin paths: the target must start with a single '/' and contain no "
         "backslashes or control characters. Reject anything else with 400."},
        {std::string(ids::kVerboseErrors),
         "Render the fixed generic error page for every unhandled exception; keep details in server logs."},
        {std::string(ids::kCsrfProfile),
         "Synchronizer token: store a random token in the session at login, emit it as a hidden `csrf` field "
         "in the profile form and reject updates whose token does not match (403)."},
        {std::string(ids::kDefaultManagerCreds), "Do not deploy the management console in production builds."},
        {std::string(ids::kMd5AdminPass),
         "Store PBKDF2-HMAC-SHA256 hashes with a per-user 128-bit salt, give the administrator a strong "
         "password and remove the debug comment from the member list."},
        {std::string(ids::kSqliProfile),
         "Parse uid strictly as an integer (400 otherwise) and bind it as the third statement parameter: "
         "`update M_USER set muname = ?, mpwd = ? where ID = ?`."},
        {std::string(ids::kDomXssHelp), "Assign the topic with `textContent` instead of `innerHTML`."},
        {std::string(ids::kMissingAclAdmin),
         "Check the administrator role in every admin function, including user deletion and the report."},
        {std::string(ids::kStoredXssComments),
         "HTML-escape comment bodies when rendering. Stripping <script> elements is not sufficient."},
        {std::string(ids::kWeakSession),
         "Draw 128-bit session ids from a CSPRNG, issue a fresh id at login and set HttpOnly and SameSite."},
        {std::string(ids::kSecondOrderSqli),
         "Bind the account in the report's per-user query (`WHERE author_id = ?`) and restore the role check "
         "on the report page."},
    };
    return fixes;
}

const std::string kSecondOrderSolution =
    "Solution: register an account whose name closes the string literal of the report's per-user count "
    "query and appends `UNION SELECT mpwd FROM M_USER WHERE role='admin'`. Registration stores the name "
    "safely; the report page later concatenates it into SQL. Any logged-in user can open the report "
    "because its role check is missing, so the admin password digest appears in the crafted account's row.";

void write_file(const fs::path& path, const std::string& content)
{
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw BundleError("cannot write " + path.string());
    out << content;
    if (!out) throw BundleError("write failed: " + path.string());
}

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw BundleError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string checksum_text(const std::map<std::string, std::string>& digests)
{
    std::string body;
    for (const auto& [path, digest] : digests) body += digest + "  " + path + "\n";
    return body + "bundle " + crypto::sha256_hex(body) + "\n";
}

}  // namespace

std::string vuln_doc(const vuln::VulnerabilityDescriptor& v)
{
    std::ostringstream out;
    out << "# " << v.title << "\n\n";
    out << "- id: `" << v.id << "`\n";
    out << "- stage: " << vuln::to_string(v.stage) << "\n";
    out << "- flaw class: " << vuln::to_string(v.flaw_class) << " (" << vuln::describe(v.flaw_class) << ")\n";
    out << "- OWASP: " << vuln::to_string(v.owasp) << " (" << vuln::describe(v.owasp) << ")\n";
    out << "- routes:";
    for (const auto& r : v.routes) out << " `" << r << "`";
    out << "\n\n## Description\n\n" << v.description << "\n";
    if (v.id == ids::kSecondOrderSqli) out << "\n" << kSecondOrderSolution << "\n";
    out << "\n## Hints\n\n";
    for (std::size_t i = 0; i < v.hints.size(); ++i) out << i + 1 << ". " << v.hints[i] << "\n";
    auto fix = reference_fixes().find(v.id);
    if (fix != reference_fixes().end()) out << "\n## Reference fix\n\n" << fix->second << "\n";
    return out.str();
}

Bundle pack(const fs::path& manifest_path, const fs::path& out_dir, const PackOptions& options)
{
    std::string text;
    try {
        text = read_file(manifest_path);
    } catch (const BundleError&) {
        throw BundleError("cannot read manifest " + manifest_path.string());
    }
    auto res = vuln::validate_manifest(text);
    if (!res.ok()) {
        std::string msg;
        for (const auto& e : res.errors) msg += (msg.empty() ? "" : "\n") + manifest_path.string() + ": " + e;
        throw BundleError(msg);
    }
    auto bundle = pack_config(*res.config, out_dir, options);
    bundle.notices = std::move(res.notices);
    return bundle;
}

Bundle pack_config(const vuln::BuildConfig& config, const fs::path& out_dir, const PackOptions& options)
{
    std::map<std::string, std::string> files;
    files[kManifestFile] = vuln::write_manifest(config);
    files[kSeedFile] = app::seed_sql(app::make_seed(config));
    files["assets/static/help.js"] = app::help_script(config.vulnerable(ids::kDomXssHelp));

    std::string index = "# Enabled vulnerabilities\n\n";
    for (const auto& v : vuln::catalog()) {
        if (!config.vulnerable(v.id)) continue;
        bool withheld = v.challenge_sealed && !options.include_sealed;
        index += "- " + std::string(vuln::to_string(v.stage)) + " `" + v.id + "` " +
                 (withheld ? "sealed challenge (write-up withheld)" : v.title) + "\n";
        if (!withheld) files["docs/" + v.id + ".md"] = vuln_doc(v);
    }
    if (config.enabled.empty()) index += "None: this is the fully fixed application.\n";
    files["docs/index.md"] = index;
    if (options.lecturer_key) files["docs/sealed-key.sha256"] = crypto::sha256_hex(*options.lecturer_key) + "\n";

    try {
        if (fs::exists(out_dir)) {
            if (!fs::is_directory(out_dir)) throw BundleError(out_dir.string() + " is not a directory");
            if (fs::exists(out_dir / kChecksumFile)) {
                fs::remove_all(out_dir);
            } else if (!fs::is_empty(out_dir)) {
                throw BundleError("output directory " + out_dir.string() + " is not empty and not a bundle");
            }
        }
        fs::create_directories(out_dir);
        std::map<std::string, std::string> digests;
        for (const auto& [rel, content] : files) {
            write_file(out_dir / rel, content);
            digests[rel] = crypto::sha256_hex(content);
        }
        auto sums = checksum_text(digests);
        write_file(out_dir / kChecksumFile, sums);

        Bundle b;
        b.dir = out_dir;
        b.config = config;
        for (const auto& [rel, _] : files) b.files.push_back(rel);
        b.checksum = crypto::sha256_hex(sums.substr(0, sums.rfind("bundle ")));
        return b;
    } catch (const fs::filesystem_error& e) {
        throw BundleError(std::string("I/O error: ") + e.what());
    }
}

LoadedBundle load_bundle(const fs::path& dir)
{
    auto sums = read_file(dir / kChecksumFile);
    std::map<std::string, std::string> listed;
    std::string declared;
    std::istringstream in(sums);
    std::string line;
    while (std::getline(in, line)) {
        if (line.starts_with("bundle ")) {
            declared = line.substr(7);
            continue;
        }
        auto sep = line.find("  ");
        if (sep == std::string::npos) throw BundleError("malformed CHECKSUM line: " + line);
        listed[line.substr(sep + 2)] = line.substr(0, sep);
    }
    if (declared.empty()) throw BundleError("CHECKSUM has no bundle digest");

    std::map<std::string, std::string> actual;
    for (const auto& [rel, digest] : listed) {
        if (rel.find("..") != std::string::npos) throw BundleError("CHECKSUM lists a path outside the bundle: " + rel);
        auto content = read_file(dir / rel);
        actual[rel] = crypto::sha256_hex(content);
        if (actual[rel] != digest) throw BundleError("checksum mismatch for " + rel);
    }
    auto expected = checksum_text(actual);
    if (expected != sums) throw BundleError("bundle checksum mismatch");
    if (!listed.contains(kManifestFile) || !listed.contains(kSeedFile)) {
        throw BundleError("bundle lacks manifest or seed");
    }

    auto res = vuln::validate_manifest(read_file(dir / kManifestFile));
    if (!res.ok()) throw BundleError("bundle manifest invalid: " + res.errors.front());
    if (!res.notices.empty()) throw BundleError("bundle manifest is not resolved");

    LoadedBundle b;
    b.config = *res.config;
    b.seed_sql = read_file(dir / kSeedFile);
    b.assets_dir = dir / "assets" / "static";
    b.checksum = declared;
    return b;
}

int effective_port(std::optional<int> port_override, const char* env_value, int manifest_port)
{
    if (port_override) return *port_override;
    if (env_value && *env_value) {
        try {
            std::size_t used = 0;
            int p = std::stoi(env_value, &used);
            if (used == std::string_view(env_value).size() && p >= 0 && p <= 65535) return p;
        } catch (const std::exception&) {
        }
        throw BundleError(std::string("invalid BREW_PORT '") + env_value + "'");
    }
    return manifest_port;
}

Deployment deploy(const fs::path& bundle_dir, const ServeOptions& options)
{
    auto loaded = load_bundle(bundle_dir);
    auto config = loaded.config;
    if (options.mode_override) config.mode = *options.mode_override;
    config.port = effective_port(options.port_override, std::getenv("BREW_PORT"), config.port);

    Deployment d;
    d.app = std::make_unique<app::Application>(config, app::AppOptions{loaded.seed_sql, loaded.assets_dir});
    d.server = std::make_unique<server::HttpServer>(*d.app);
    d.server->bind(options.host, config.port);
    return d;
}

std::vector<vuln::VulnerabilityDescriptor> select(const ListFilter& filter)
{
    std::optional<vuln::Stage> stage;
    std::optional<vuln::FlawClass> flaw;
    std::optional<vuln::OwaspCategory> owasp;
    if (filter.stage && !(stage = vuln::parse_stage(*filter.stage))) {
        throw std::invalid_argument("bad --stage value '" + *filter.stage + "' (expected C1..C4)");
    }
    if (filter.flaw && !(flaw = vuln::parse_flaw(*filter.flaw))) {
        throw std::invalid_argument("bad --flaw value '" + *filter.flaw + "' (expected F1..F4)");
    }
    if (filter.owasp && !(owasp = vuln::parse_owasp(*filter.owasp))) {
        throw std::invalid_argument("bad --owasp value '" + *filter.owasp + "' (expected A1..A10)");
    }
    std::vector<vuln::VulnerabilityDescriptor> out;
    for (const auto& v : vuln::catalog()) {
        if (stage && v.stage != *stage) continue;
        if (flaw && v.flaw_class != *flaw) continue;
        if (owasp && v.owasp != *owasp) continue;
        out.push_back(v);
    }
    return out;
}

std::string format_table(const std::vector<vuln::VulnerabilityDescriptor>& rows)
{
    std::size_t id_width = 2;
    for (const auto& v : rows) id_width = std::max(id_width, v.id.size());
    std::ostringstream out;
    out << std::left << std::setw(static_cast<int>(id_width)) << "ID" << "  STAGE  FLAW  OWASP  TITLE\n";
    for (const auto& v : rows) {
        out << std::left << std::setw(static_cast<int>(id_width)) << v.id << "  " << std::setw(5)
            << vuln::to_string(v.stage) << "  " << std::setw(4) << vuln::to_string(v.flaw_class) << "  "
            << std::setw(5) << vuln::to_string(v.owasp) << "  " << v.title << "\n";
    }
    return out.str();
}

nlohmann::json to_json(const std::vector<vuln::VulnerabilityDescriptor>& rows)
{
    auto arr = nlohmann::json::array();
    for (const auto& v : rows) {
        arr.push_back({{"id", v.id},
                       {"title", v.title},
                       {"stage", vuln::to_string(v.stage)},
                       {"flaw", vuln::to_string(v.flaw_class)},
                       {"owasp", vuln::to_string(v.owasp)},
                       {"routes", v.routes},
                       {"sealed", v.challenge_sealed}});
    }
    return arr;
}

}  // namespace brew::dist
