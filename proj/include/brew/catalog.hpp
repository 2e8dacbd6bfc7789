#pragma once

// Vulnerability catalog, stage dependency resolver and the manifest format.

#include <array>
#include <optional>
#include <stdexcept>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace brew::vuln {

enum class Stage { C1 = 1, C2, C3, C4 };
enum class FlawClass { F1 = 1, F2, F3, F4 };
enum class OwaspCategory { A1 = 1, A2, A3, A4, A5, A6, A7, A8, A9, A10 };

std::string_view to_string(Stage s);
std::string_view to_string(FlawClass f);
std::string_view to_string(OwaspCategory a);
std::string_view describe(FlawClass f);
std::string_view describe(OwaspCategory a);
std::optional<Stage> parse_stage(std::string_view s);
std::optional<FlawClass> parse_flaw(std::string_view s);
std::optional<OwaspCategory> parse_owasp(std::string_view s);

struct VulnerabilityDescriptor {
    std::string id;
    std::string title;
    Stage stage;
    FlawClass flaw_class;
    OwaspCategory owasp;
    std::vector<std::string> routes;
    std::string description;
    std::array<std::string, 3> hints;  // vague -> specific
    bool challenge_sealed = false;
};

namespace ids {
inline constexpr std::string_view kXssSearch = "xss-search";
inline constexpr std::string_view kOpenRedirect = "open-redirect";
inline constexpr std::string_view kVerboseErrors = "verbose-errors";
inline constexpr std::string_view kSqliProfile = "sqli-profile";
inline constexpr std::string_view kCsrfProfile = "csrf-profile";
inline constexpr std::string_view kMd5AdminPass = "md5-admin-pass";
inline constexpr std::string_view kDefaultManagerCreds = "default-manager-creds";
inline constexpr std::string_view kMissingAclAdmin = "missing-acl-admin";
inline constexpr std::string_view kWeakSession = "weak-session";
inline constexpr std::string_view kStoredXssComments = "stored-xss-comments";
inline constexpr std::string_view kDomXssHelp = "dom-xss-help";
inline constexpr std::string_view kSecondOrderSqli = "second-order-sqli";
}  // namespace ids

/// Full catalog, ordered by stage then id.
const std::vector<VulnerabilityDescriptor>& catalog();
const VulnerabilityDescriptor* find(std::string_view id, std::span<const VulnerabilityDescriptor> cat = catalog());

std::vector<VulnerabilityDescriptor> filter(Stage s, std::span<const VulnerabilityDescriptor> cat = catalog());
std::vector<VulnerabilityDescriptor> filter(FlawClass f, std::span<const VulnerabilityDescriptor> cat = catalog());
std::vector<VulnerabilityDescriptor> filter(OwaspCategory a, std::span<const VulnerabilityDescriptor> cat = catalog());

using IdSet = std::set<std::string, std::less<>>;

class SelectionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Minimal superset of `requested` closed under the stage rules:
///   any C3 id selected => every C1 and C2 id selected;
///   any C4 id selected => the whole catalog selected.
/// Throws SelectionError naming the first unknown id.
IdSet resolve_selection(const IdSet& requested, std::span<const VulnerabilityDescriptor> cat = catalog());

/// True iff `enabled` satisfies both closure rules literally.
bool satisfies_stage_rules(const IdSet& enabled, std::span<const VulnerabilityDescriptor> cat = catalog());

/// Ids in catalog order.
std::vector<std::string> ordered(const IdSet& ids, std::span<const VulnerabilityDescriptor> cat = catalog());

enum class DeployMode { Whitebox, Blackbox };
std::string_view to_string(DeployMode m);
std::optional<DeployMode> parse_mode(std::string_view s);

inline constexpr int kDefaultPort = 8080;

struct BuildConfig {
    IdSet enabled;
    DeployMode mode = DeployMode::Whitebox;
    int port = kDefaultPort;

    bool vulnerable(std::string_view id) const { return enabled.contains(id); }
    bool verbose_errors() const { return vulnerable(ids::kVerboseErrors); }

    /// Resolves `requested` against the catalog.
    static BuildConfig from_selection(const IdSet& requested, DeployMode mode = DeployMode::Whitebox,
                                      int port = kDefaultPort);
    static BuildConfig full(DeployMode mode = DeployMode::Whitebox);
    static BuildConfig fixed(DeployMode mode = DeployMode::Whitebox) { return from_selection({}, mode); }
};

struct ManifestResult {
    std::optional<BuildConfig> config;
    std::vector<std::string> errors;   // "line N: ..."
    std::vector<std::string> notices;  // ids added by closure
    bool ok() const { return config.has_value(); }
};

/// Parses the line-oriented manifest:
///   # comment            (also after leading whitespace)
///   mode whitebox|blackbox
///   port <1..65535>
///   vuln <id>            (repeatable)
ManifestResult validate_manifest(std::string_view text);

/// Canonical manifest text for a resolved config (vuln lines in catalog order).
std::string write_manifest(const BuildConfig& config);

}  // namespace brew::vuln
