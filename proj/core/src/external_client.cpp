#include <atomic>
#include <chrono>
#include <thread>

#include "fnav/policy.hpp"
#include "httplib.h"
#include "json.hpp"

namespace fnav::policy {

namespace {

struct Endpoint {
  std::string base;  // scheme://host[:port]
  std::string path;
};

Endpoint split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos || url.compare(0, scheme_end, "http") != 0) {
    throw Error(ErrorCode::EndpointError, "policy endpoint must be an http:// URL, got '" + url + "'");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

PolicyDecision external_roundtrip(const std::string& url, const PromptSample& sample, int timeout_ms,
                                  const std::optional<std::string>& debug_letter) {
  if (timeout_ms <= 0) throw Error(ErrorCode::InvalidArgument, "timeout_ms must be > 0");
  const Endpoint ep = split_url(url);
  const auto timeout = std::chrono::milliseconds(timeout_ms);

  httplib::Client client(ep.base);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);

  const auto t0 = std::chrono::steady_clock::now();
  const auto res = client.Post(ep.path, to_wire_json(sample, debug_letter), "application/json");
  const double elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

  if (!res) {
    const auto err = res.error();
    // A read that fails only after the whole budget elapsed is a stalled server, not a broken one.
    if (err == httplib::Error::ConnectionTimeout || (err == httplib::Error::Read && elapsed >= timeout_ms)) {
      throw Error(ErrorCode::Timeout, "no reply from " + url + " within " + std::to_string(timeout_ms) + " ms");
    }
    throw Error(ErrorCode::EndpointError, "request to " + url + " failed: " + httplib::to_string(err));
  }
  if (res->status < 200 || res->status >= 300) {
    throw Error(ErrorCode::EndpointError, "policy endpoint returned HTTP " + std::to_string(res->status));
  }
  return {parse_reply(res->body, sample), elapsed};
}

struct StubServer::Impl {
  Options opts;
  httplib::Server server;
  int port = 0;
  std::thread thread;
  std::atomic<bool> stopping{false};
  std::atomic<std::uint64_t> requests{0};
};

StubServer::StubServer(Options opts) : impl_(std::make_unique<Impl>()) {
  impl_->opts = std::move(opts);
  Impl* impl = impl_.get();
  impl->server.Post(R"(.*)", [impl](const httplib::Request& req, httplib::Response& res) {
    ++impl->requests;
    for (int waited = 0; waited < impl->opts.delay_ms && !impl->stopping; waited += 5) {
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    std::string letter;
    try {
      const auto j = nlohmann::json::parse(req.body);
      if (j.contains("debug") && j["debug"].contains("oracle_letter")) {
        letter = j["debug"]["oracle_letter"].get<std::string>();
      } else if (impl->opts.fixed_letter) {
        letter = *impl->opts.fixed_letter;
      } else if (!j.at("choices").empty()) {
        letter = j["choices"][0].at("letter").get<std::string>();
      }
    } catch (const nlohmann::json::exception&) {
      res.status = 400;
      res.set_content(R"({"error":"bad request"})", "application/json");
      return;
    }
    res.status = impl->opts.status;
    res.set_content(nlohmann::json{{"letter", letter}}.dump(), "application/json");
  });
  impl->port = impl->opts.port == 0 ? impl->server.bind_to_any_port(impl->opts.host)
                                    : (impl->server.bind_to_port(impl->opts.host, impl->opts.port) ? impl->opts.port : -1);
  if (impl->port <= 0) {
    throw Error(ErrorCode::EndpointError, "stub server could not bind " + impl->opts.host);
  }
}

StubServer::~StubServer() { stop(); }

int StubServer::port() const { return impl_->port; }

std::string StubServer::url() const { return "http://" + impl_->opts.host + ":" + std::to_string(impl_->port) + "/"; }

void StubServer::run() { impl_->server.listen_after_bind(); }

void StubServer::start() {
  if (impl_->thread.joinable()) return;
  impl_->thread = std::thread([impl = impl_.get()] { impl->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void StubServer::stop() {
  impl_->stopping = true;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

std::uint64_t StubServer::requests() const { return impl_->requests; }

}  // namespace fnav::policy
