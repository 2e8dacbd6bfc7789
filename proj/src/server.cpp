#include "brew/server.hpp"

#include <httplib.h>

namespace brew::server {

namespace {

void forward(const app::Application& app, http::Method method, const httplib::Request& in, httplib::Response& out)
{
    http::HeaderMap headers;
    for (const auto& [k, v] : in.headers) headers.emplace(k, v);
    auto target = in.target.empty() ? in.path : in.target;
    auto req = http::Request::make(method, target, std::move(headers), in.body);
    auto resp = app.handle(req);

    out.status = resp.status;
    for (const auto& [k, v] : resp.headers) out.headers.emplace(k, v);
    out.body = std::move(resp.body);
}

}  // namespace

HttpServer::HttpServer(app::Application& app) : app_(app), svr_(std::make_unique<httplib::Server>())
{
    svr_->Get(".*", [this](const httplib::Request& in, httplib::Response& out) {
        forward(app_, http::Method::Get, in, out);
    });
    svr_->Post(".*", [this](const httplib::Request& in, httplib::Response& out) {
        forward(app_, http::Method::Post, in, out);
    });
    app_.set_shutdown_hook([this] { svr_->stop(); });
}

HttpServer::~HttpServer()
{
    stop();
    app_.set_shutdown_hook({});
}

int HttpServer::bind(const std::string& host, int port)
{
    host_ = host;
    if (port == 0) {
        port_ = svr_->bind_to_any_port(host);
        if (port_ < 0) throw StartupError("cannot bind " + host);
    } else {
        if (!svr_->bind_to_port(host, port)) {
            throw StartupError("cannot bind " + host + ":" + std::to_string(port) + " (port busy?)");
        }
        port_ = port;
    }
    return port_;
}

void HttpServer::listen() { svr_->listen_after_bind(); }

void HttpServer::start()
{
    thread_ = std::thread([this] { svr_->listen_after_bind(); });
    svr_->wait_until_ready();
}

void HttpServer::stop()
{
    if (svr_->is_running()) svr_->stop();
    if (thread_.joinable()) thread_.join();
}

std::string HttpServer::base_url() const { return "http://" + host_ + ":" + std::to_string(port_); }

}  // namespace brew::server
