#pragma once

#include "brew/app.hpp"

#include <memory>
#include <string>
#include <thread>

namespace httplib {
class Server;
}

namespace brew::server {

class StartupError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// HTTP/1.1 listener that forwards every GET/POST to Application::handle.
class HttpServer {
public:
    explicit HttpServer(app::Application& app);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds the listener; port 0 picks a free port. Throws StartupError.
    int bind(const std::string& host, int port);
    /// Serves until stop(). Requires bind().
    void listen();
    /// listen() on a background thread; returns once the listener is accepting.
    void start();
    void stop();

    int port() const { return port_; }
    std::string base_url() const;

private:
    app::Application& app_;
    std::unique_ptr<httplib::Server> svr_;
    std::thread thread_;
    std::string host_ = "127.0.0.1";
    int port_ = 0;
};

}  // namespace brew::server
