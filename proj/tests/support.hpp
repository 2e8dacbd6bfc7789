#pragma once

// Helpers shared by the test binaries: an in-process client with a cookie
// jar, and a live server on an ephemeral port.

#include "brew/app.hpp"
#include "brew/server.hpp"

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace brew::test {

using Form = std::vector<std::pair<std::string, std::string>>;

inline std::string encode_form(const Form& form)
{
    std::string body;
    for (const auto& [k, v] : form) {
        if (!body.empty()) body += '&';
        body += http::url_encode(k) + "=" + http::url_encode(v);
    }
    return body;
}

/// Drives an Application directly, keeping the session cookie between calls.
class Client {
public:
    explicit Client(const app::Application& app) : app_(app) {}

    http::Response get(const std::string& target, http::HeaderMap headers = {})
    {
        return send(http::Method::Get, target, std::move(headers), {});
    }

    http::Response post(const std::string& target, const Form& form, http::HeaderMap headers = {})
    {
        headers.emplace("Content-Type", "application/x-www-form-urlencoded");
        return send(http::Method::Post, target, std::move(headers), encode_form(form));
    }

    http::Response login(std::string_view user, std::string_view password)
    {
        return post("/login.secu", {{"username", std::string(user)}, {"password", std::string(password)}});
    }

    std::optional<std::string> session_id() const
    {
        auto it = cookies_.find(http::kSessionCookie);
        if (it == cookies_.end()) return std::nullopt;
        return it->second;
    }

    void set_session(const std::string& id) { cookies_[http::kSessionCookie] = id; }
    void clear() { cookies_.clear(); }

private:
    http::Response send(http::Method m, const std::string& target, http::HeaderMap headers, std::string body)
    {
        if (!cookies_.empty()) {
            std::string c;
            for (const auto& [k, v] : cookies_) c += (c.empty() ? "" : "; ") + k + "=" + v;
            headers.emplace("Cookie", c);
        }
        auto resp = app_.handle(http::Request::make(m, target, std::move(headers), std::move(body)));
        for (const auto& sc : resp.header_values("Set-Cookie")) {
            auto eq = sc.find('=');
            auto end = sc.find(';');
            if (eq == std::string::npos) continue;
            auto value = sc.substr(eq + 1, end == std::string::npos ? std::string::npos : end - eq - 1);
            if (value.empty()) {
                cookies_.erase(sc.substr(0, eq));
            } else {
                cookies_[sc.substr(0, eq)] = value;
            }
        }
        return resp;
    }

    const app::Application& app_;
    std::map<std::string, std::string> cookies_;
};

/// Application plus HTTP server on 127.0.0.1 with an ephemeral port.
struct LiveServer {
    std::unique_ptr<app::Application> app;
    std::unique_ptr<server::HttpServer> server;

    explicit LiveServer(const vuln::BuildConfig& config, app::AppOptions options = {})
        : app(std::make_unique<app::Application>(config, std::move(options))),
          server(std::make_unique<server::HttpServer>(*app))
    {
        server->bind("127.0.0.1", 0);
        server->start();
    }

    ~LiveServer() { server->stop(); }

    std::string url() const { return server->base_url(); }
};

inline std::size_t count(const std::string& haystack, std::string_view needle)
{
    std::size_t n = 0;
    for (auto pos = haystack.find(needle); pos != std::string::npos; pos = haystack.find(needle, pos + 1)) ++n;
    return n;
}

}  // namespace brew::test
