#pragma once

#include "semtag/api.hpp"

#include <memory>
#include <string>

namespace httplib {
class Server;
}

namespace semtag {

/// Serves an Api over HTTP with cpp-httplib's thread pool.
class HttpServer {
public:
    explicit HttpServer(Api& api);
    ~HttpServer();

    /// Binds to `port`, or to an ephemeral port when `port` is 0. Returns the bound port.
    int bind(const std::string& address, int port);
    /// Blocks until stop().
    void serve();
    void stop();
    void wait_until_ready() const;

private:
    Api& api_;
    std::unique_ptr<httplib::Server> server_;
};

} // namespace semtag
