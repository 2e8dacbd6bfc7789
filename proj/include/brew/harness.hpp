#pragma once

// Scripted exploits with machine verdicts, run over HTTP against a live
// instance. Only the documented seed accounts (alice, bob) are assumed.

#include "brew/catalog.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace brew::harness {

enum class Verdict { Exploited, Blocked, Error };
std::string_view to_string(Verdict v);

struct ExploitOutcome {
    Verdict verdict = Verdict::Error;
    std::string evidence;            // matched fragment / header / observation, or the error message
    std::vector<std::string> steps;  // "POST /login.secu -> 302"
};

struct ReportRow {
    std::string id;
    Verdict expected = Verdict::Blocked;
    ExploitOutcome outcome;
    bool ok() const { return outcome.verdict == expected; }
};

struct ExploitReport {
    std::string target;
    std::vector<std::string> config_claimed;  // catalog order
    std::vector<ReportRow> rows;              // catalog order
    bool pass = false;
};

/// MD5 digest -> plaintext for common passwords.
class RainbowTable {
public:
    static const RainbowTable& builtin();
    std::optional<std::string> lookup(std::string_view md5_hex) const;
    const std::map<std::string, std::string, std::less<>>& entries() const { return entries_; }

private:
    std::map<std::string, std::string, std::less<>> entries_;
};

/// Exact-match lookup. Throws std::invalid_argument unless the digest is 32
/// lowercase hex characters.
std::optional<std::string> crack_md5(std::string_view hash_hex, const RainbowTable& table = RainbowTable::builtin());

/// Executes the scripted attack for one catalog entry. Transport failures and
/// unexpected statuses yield Verdict::Error, never Blocked. Throws
/// std::invalid_argument for an id outside the catalog.
ExploitOutcome run_exploit(std::string_view vuln_id, const std::string& base_url);

/// Runs every exploit in catalog order. Enabled ids must be Exploited and all
/// others Blocked. Reseeds between exploits when the target offers the
/// whitebox reseed hook.
ExploitReport verify_build(const vuln::BuildConfig& claimed, const std::string& base_url);

/// Literal attack strings an exploit sends (for hint leak checks).
std::vector<std::string> payloads(std::string_view vuln_id);

nlohmann::json to_json(const ExploitOutcome& outcome);
nlohmann::json to_json(const ExploitReport& report);
/// Human-readable report, one line per row.
std::string format_report(const ExploitReport& report);

}  // namespace brew::harness
