#include <httplib.h>

#include "gen/service.hpp"

namespace gen {

struct HttpServer::Impl {
  ReviewService& service;
  httplib::Server server;

  explicit Impl(ReviewService& s) : service(s) {
    auto handler = [this](const httplib::Request& req, httplib::Response& res) {
      std::map<std::string, std::string> query;
      for (const auto& [k, v] : req.params) query.emplace(k, v);
      const auto r = handle_request(service, req.method, req.path, query, req.body);
      res.status = r.status;
      res.set_content(r.body, "application/json");
    };
    const std::string any = R"(/.*)";
    server.Get(any, handler);
    server.Post(any, handler);
    server.Put(any, handler);
    server.Delete(any, handler);
    server.Patch(any, handler);
  }
};

HttpServer::HttpServer(ReviewService& service) : impl_(std::make_unique<Impl>(service)) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace gen
