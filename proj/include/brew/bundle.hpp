#pragma once

// Deployment bundles: a directory holding the resolved manifest, seed SQL,
// static assets and lecturer docs, sealed by a checksum file.
//
//   manifest.brew           resolved manifest (catalog order)
//   seed.sql                schema and seed rows for this build
//   assets/static/help.js   help page script variant for this build
//   docs/index.md           enabled vulnerabilities
//   docs/<id>.md            write-up per enabled vulnerability (sealed ones only with include_sealed)
//   docs/sealed-key.sha256  SHA-256 of the lecturer key, when one was given
//   CHECKSUM                "<sha256>  <path>" per file, then "bundle <sha256>"

#include "brew/app.hpp"
#include "brew/catalog.hpp"
#include "brew/server.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace brew::dist {

namespace fs = std::filesystem;

class BundleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr const char* kChecksumFile = "CHECKSUM";
inline constexpr const char* kManifestFile = "manifest.brew";
inline constexpr const char* kSeedFile = "seed.sql";

struct Bundle {
    fs::path dir;
    vuln::BuildConfig config;
    std::vector<std::string> files;  // relative, sorted; excludes CHECKSUM
    std::string checksum;
    std::vector<std::string> notices;
};

struct PackOptions {
    bool include_sealed = false;
    std::optional<std::string> lecturer_key;
};

/// Validates the manifest and writes the bundle. Manifest problems raise
/// BundleError carrying every "line N: ..." message.
Bundle pack(const fs::path& manifest_path, const fs::path& out_dir, const PackOptions& options = {});
Bundle pack_config(const vuln::BuildConfig& config, const fs::path& out_dir, const PackOptions& options = {});

/// Write-up for one catalog entry: description, hints and the reference fix.
std::string vuln_doc(const vuln::VulnerabilityDescriptor& v);

struct LoadedBundle {
    vuln::BuildConfig config;
    std::string seed_sql;
    fs::path assets_dir;
    std::string checksum;
};

/// Reads a bundle, refusing it when any listed file is missing or altered.
LoadedBundle load_bundle(const fs::path& dir);

struct ServeOptions {
    std::optional<vuln::DeployMode> mode_override;
    std::optional<int> port_override;
    std::string host = "0.0.0.0";
};

/// Port precedence: explicit override, then BREW_PORT, then the manifest.
int effective_port(std::optional<int> port_override, const char* env_value, int manifest_port);

/// A bound (not yet listening) server for a bundle.
struct Deployment {
    std::unique_ptr<app::Application> app;
    std::unique_ptr<server::HttpServer> server;
};

Deployment deploy(const fs::path& bundle_dir, const ServeOptions& options);

struct ListFilter {
    std::optional<std::string> stage;
    std::optional<std::string> flaw;
    std::optional<std::string> owasp;
};

/// Catalog entries matching every given filter. Throws std::invalid_argument
/// naming a malformed filter value.
std::vector<vuln::VulnerabilityDescriptor> select(const ListFilter& filter);
std::string format_table(const std::vector<vuln::VulnerabilityDescriptor>& rows);
nlohmann::json to_json(const std::vector<vuln::VulnerabilityDescriptor>& rows);

}  // namespace brew::dist
