#include "brew/bundle.hpp"
#include "brew/catalog.hpp"
#include "brew/harness.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace {

using namespace brew;

int cmd_list(const dist::ListFilter& filter, bool json)
{
    std::vector<vuln::VulnerabilityDescriptor> rows;
    try {
        rows = dist::select(filter);
    } catch (const std::invalid_argument& e) {
        std::cerr << "brew list: " << e.what() << "\n";
        return 2;
    }
    if (json) {
        std::cout << dist::to_json(rows).dump(2) << "\n";
    } else {
        std::cout << dist::format_table(rows);
    }
    return 0;
}

std::optional<vuln::BuildConfig> read_manifest(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        std::cerr << "cannot read manifest " << path << "\n";
        return std::nullopt;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    auto res = vuln::validate_manifest(ss.str());
    for (const auto& e : res.errors) std::cerr << path << ": " << e << "\n";
    for (const auto& n : res.notices) std::cerr << path << ": " << n << "\n";
    return res.config;
}

int cmd_verify(const std::string& target, const std::string& manifest, bool json)
{
    auto config = read_manifest(manifest);
    if (!config) return 2;
    auto report = harness::verify_build(*config, target);
    if (json) {
        std::cout << harness::to_json(report).dump(2) << "\n";
    } else {
        std::cout << harness::format_report(report);
    }
    return report.pass ? 0 : 1;
}

int cmd_exploit(const std::string& id, const std::string& target)
{
    if (!vuln::find(id)) {
        std::cerr << "brew exploit: unknown vulnerability id '" << id << "'\n";
        return 2;
    }
    auto outcome = harness::run_exploit(id, target);
    std::cout << harness::to_json(outcome).dump(2) << "\n";
    return outcome.verdict == harness::Verdict::Exploited ? 0 : 1;
}

int cmd_pack(const std::string& manifest, const std::string& out, bool include_sealed,
             const std::optional<std::string>& lecturer_key)
{
    try {
        auto bundle = dist::pack(manifest, out, {include_sealed, lecturer_key});
        for (const auto& n : bundle.notices) std::cerr << manifest << ": " << n << "\n";
        std::cout << "packed " << bundle.dir.string() << " (" << bundle.files.size() << " files, checksum "
                  << bundle.checksum << ")\n";
        return 0;
    } catch (const dist::BundleError& e) {
        std::cerr << "brew pack: " << e.what() << "\n";
        return 1;
    }
}

int cmd_serve(const std::string& bundle_dir, const std::optional<std::string>& mode, std::optional<int> port)
{
    dist::ServeOptions opts;
    if (mode) {
        opts.mode_override = vuln::parse_mode(*mode);
        if (!opts.mode_override) {
            std::cerr << "brew serve: unknown mode '" << *mode << "'\n";
            return 2;
        }
    }
    opts.port_override = port;

    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    dist::Deployment d;
    try {
        d = dist::deploy(bundle_dir, opts);
    } catch (const std::exception& e) {
        std::cerr << "brew serve: " << e.what() << "\n";
        return 1;
    }
    const auto& cfg = d.app->config();
    std::cerr << "serving " << bundle_dir << " on port " << d.server->port() << " (" << vuln::to_string(cfg.mode)
              << ", " << cfg.enabled.size() << " vulnerabilities enabled)\n";

    std::thread waiter([&] {
        int sig = 0;
        sigwait(&signals, &sig);
        d.server->stop();
    });
    waiter.detach();
    d.server->listen();
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App cli{"Deliberately vulnerable web application: catalog, packer, server and exploit harness"};
    cli.require_subcommand(1);

    auto* list = cli.add_subcommand("list", "List catalog entries");
    dist::ListFilter filter;
    bool list_json = false;
    list->add_option("--stage", filter.stage, "C1..C4");
    list->add_option("--flaw", filter.flaw, "F1..F4");
    list->add_option("--owasp", filter.owasp, "A1..A10");
    list->add_flag("--json", list_json);

    auto* verify = cli.add_subcommand("verify", "Run every exploit against a running instance");
    std::string target, manifest;
    bool verify_json = false;
    verify->add_option("--target", target, "Base URL, e.g. http://127.0.0.1:8080")->required();
    verify->add_option("--manifest", manifest, "Manifest the instance was built from")->required();
    verify->add_flag("--json", verify_json);

    auto* exploit = cli.add_subcommand("exploit", "Run one exploit");
    std::string exploit_id, exploit_target;
    exploit->add_option("id", exploit_id)->required();
    exploit->add_option("--target", exploit_target)->required();

    auto* pack = cli.add_subcommand("pack", "Build a deployment bundle from a manifest");
    std::string pack_manifest, pack_out;
    bool include_sealed = false;
    std::optional<std::string> lecturer_key;
    pack->add_option("--manifest", pack_manifest)->required();
    pack->add_option("--out", pack_out)->required();
    pack->add_flag("--include-sealed", include_sealed, "Include write-ups of sealed challenges");
    pack->add_option("--lecturer-key", lecturer_key, "Key whose SHA-256 is stored with the docs");

    auto* serve = cli.add_subcommand("serve", "Serve a bundle");
    std::string bundle_dir;
    std::optional<std::string> mode;
    std::optional<int> port;
    serve->add_option("bundle", bundle_dir)->required();
    serve->add_option("--mode", mode, "whitebox or blackbox");
    serve->add_option("--port", port)->check(CLI::Range(0, 65535));

    CLI11_PARSE(cli, argc, argv);

    if (*list) return cmd_list(filter, list_json);
    if (*verify) return cmd_verify(target, manifest, verify_json);
    if (*exploit) return cmd_exploit(exploit_id, exploit_target);
    if (*pack) return cmd_pack(pack_manifest, pack_out, include_sealed, lecturer_key);
    if (*serve) return cmd_serve(bundle_dir, mode, port);
    return 2;
}
