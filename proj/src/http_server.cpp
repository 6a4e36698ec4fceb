#include "semtag/http_server.hpp"
#include "semtag/error.hpp"

#include <httplib.h>
#include <spdlog/spdlog.h>

namespace semtag {

HttpServer::HttpServer(Api& api) : api_(api), server_(std::make_unique<httplib::Server>()) {
    auto forward = [this](const httplib::Request& req, httplib::Response& res) {
        ApiRequest ar;
        ar.method = req.method;
        ar.path = req.path;
        for (const auto& [k, v] : req.params) ar.query.emplace(k, v);
        ar.body = req.body;
        const auto out = api_.handle(ar);
        res.status = out.status;
        for (const auto& [k, v] : out.headers) res.set_header(k, v);
        res.set_content(out.body, out.content_type);
    };
    server_->Get(".*", forward);
    server_->Post(".*", forward);
    server_->Put(".*", forward);
    server_->Delete(".*", forward);
    server_->set_logger([](const httplib::Request& req, const httplib::Response& res) {
        spdlog::info("{} {} -> {}", req.method, req.path, res.status);
    });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& address, int port) {
    if (port == 0) {
        const int bound = server_->bind_to_any_port(address);
        if (bound < 0) throw Error(ErrorCode::Io, "cannot bind " + address);
        return bound;
    }
    if (!server_->bind_to_port(address, port)) {
        throw Error(ErrorCode::Io, "cannot bind " + address + ":" + std::to_string(port));
    }
    return port;
}

void HttpServer::serve() { server_->listen_after_bind(); }

void HttpServer::stop() {
    if (server_->is_running()) server_->stop();
}

void HttpServer::wait_until_ready() const { server_->wait_until_ready(); }

} // namespace semtag
