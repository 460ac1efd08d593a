#pragma once

#include "helitack/protocol.hpp"

#include <atomic>
#include <filesystem>
#include <iosfwd>
#include <mutex>
#include <set>
#include <string>
#include <string_view>

namespace helitack::serve {

// Reads request lines until close or EOF; one reply line per request.
void serve_stream(protocol::Session& session, std::istream& in, std::ostream& out);

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 0; // 0 picks a free port
  std::shared_ptr<const FuelCatalog> catalog;
  protocol::SessionOptions session;
};

/// Accept loop shared by the raw-socket and websocket transports. Each
/// connection gets its own Session on its own thread.
class Server {
public:
  enum class Framing { Lines, WebSocket };

  Server(ServerOptions options, Framing framing);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds and listens; returns the bound port. Throws std::runtime_error.
  int bind();
  // Blocks until stop() is called.
  void run();
  void stop();

private:
  void handle_connection(int fd);

  ServerOptions options_;
  Framing framing_;
  int listen_fd_ = -1;
  std::atomic<bool> stopping_{false};
  std::atomic<int> active_{0};
  std::mutex conn_mutex_;
  std::set<int> connections_;
};

// Sec-WebSocket-Accept for a client key.
std::string websocket_accept(std::string_view key);

// Single unfragmented frame, unmasked (server to client).
std::string websocket_frame(std::string_view payload, std::uint8_t opcode = 0x1);

// Static file server over `root`; blocks. Returns false when bind fails.
bool serve_http(const std::filesystem::path& root, const std::string& host, int port);

} // namespace helitack::serve
