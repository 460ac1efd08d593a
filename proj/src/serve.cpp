#include "helitack/serve.hpp"

#include <httplib.h>
#include <openssl/evp.h>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace helitack::serve {

void serve_stream(protocol::Session& session, std::istream& in, std::ostream& out) {
  std::string line;
  while (!session.closed() && std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    out << session.handle(line) << '\n';
    out.flush();
  }
}

namespace {

constexpr std::size_t kMaxMessage = 64u << 20;

bool send_all(int fd, std::string_view data) {
  while (!data.empty()) {
    const ssize_t n = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
    if (n <= 0) return false;
    data.remove_prefix(static_cast<std::size_t>(n));
  }
  return true;
}

// Buffered reader over a socket.
class Reader {
public:
  explicit Reader(int fd) : fd_(fd) {}

  bool line(std::string& out) {
    for (;;) {
      const auto nl = buf_.find('\n', pos_);
      if (nl != std::string::npos) {
        out.assign(buf_, pos_, nl - pos_);
        pos_ = nl + 1;
        if (!out.empty() && out.back() == '\r') out.pop_back();
        return true;
      }
      if (buf_.size() - pos_ > kMaxMessage || !fill()) return false;
    }
  }

  bool exact(std::size_t n, std::string& out) {
    while (buf_.size() - pos_ < n) {
      if (!fill()) return false;
    }
    out.assign(buf_, pos_, n);
    pos_ += n;
    return true;
  }

private:
  bool fill() {
    if (pos_ > 0) {
      buf_.erase(0, pos_);
      pos_ = 0;
    }
    char chunk[16384];
    const ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
    if (n <= 0) return false;
    buf_.append(chunk, static_cast<std::size_t>(n));
    return true;
  }

  int fd_;
  std::string buf_;
  std::size_t pos_ = 0;
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

bool websocket_handshake(int fd, Reader& reader) {
  std::string line;
  std::string key;
  bool first = true;
  while (reader.line(line)) {
    if (first) {
      first = false;
      if (line.rfind("GET ", 0) != 0) return false;
      continue;
    }
    if (line.empty()) break;
    const auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    if (lower(line.substr(0, colon)) == "sec-websocket-key") {
      key = line.substr(colon + 1);
      key.erase(0, key.find_first_not_of(" \t"));
      key.erase(key.find_last_not_of(" \t") + 1);
    }
  }
  if (key.empty()) {
    send_all(fd, "HTTP/1.1 400 Bad Request\r\nContent-Length: 0\r\n\r\n");
    return false;
  }
  return send_all(fd, "HTTP/1.1 101 Switching Protocols\r\nUpgrade: websocket\r\n"
                      "Connection: Upgrade\r\nSec-WebSocket-Accept: " +
                          websocket_accept(key) + "\r\n\r\n");
}

// One complete (defragmented) message; false on close or error.
bool websocket_read(int fd, Reader& reader, std::string& message) {
  message.clear();
  std::string hdr;
  for (;;) {
    if (!reader.exact(2, hdr)) return false;
    const auto b0 = static_cast<std::uint8_t>(hdr[0]);
    const auto b1 = static_cast<std::uint8_t>(hdr[1]);
    const bool fin = b0 & 0x80;
    const int opcode = b0 & 0x0f;
    const bool masked = b1 & 0x80;
    std::uint64_t len = b1 & 0x7f;
    if (len == 126 || len == 127) {
      std::string ext;
      if (!reader.exact(len == 126 ? 2 : 8, ext)) return false;
      len = 0;
      for (char c : ext) len = (len << 8) | static_cast<std::uint8_t>(c);
    }
    if (len > kMaxMessage) return false;
    std::string mask;
    if (masked && !reader.exact(4, mask)) return false;
    std::string payload;
    if (!reader.exact(static_cast<std::size_t>(len), payload)) return false;
    if (masked) {
      for (std::size_t i = 0; i < payload.size(); ++i) payload[i] ^= mask[i % 4];
    }
    switch (opcode) {
    case 0x8:
      send_all(fd, websocket_frame({}, 0x8));
      return false;
    case 0x9:
      if (!send_all(fd, websocket_frame(payload, 0xA))) return false;
      continue;
    case 0xA:
      continue;
    default:
      message += payload;
      if (message.size() > kMaxMessage) return false;
      if (fin) return true;
    }
  }
}

} // namespace

std::string websocket_accept(std::string_view key) {
  const std::string src = std::string(key) + "258EAFA5-E914-47DA-95CA-C5AB0DC85B11";
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(src.data(), src.size(), digest, &len, EVP_sha1(), nullptr);
  unsigned char out[64];
  const int n = EVP_EncodeBlock(out, digest, static_cast<int>(len));
  return std::string(reinterpret_cast<char*>(out), static_cast<std::size_t>(n));
}

std::string websocket_frame(std::string_view payload, std::uint8_t opcode) {
  std::string f;
  f.push_back(static_cast<char>(0x80 | opcode));
  const std::size_t n = payload.size();
  if (n < 126) {
    f.push_back(static_cast<char>(n));
  } else if (n <= 0xffff) {
    f.push_back(static_cast<char>(126));
    f.push_back(static_cast<char>(n >> 8));
    f.push_back(static_cast<char>(n & 0xff));
  } else {
    f.push_back(static_cast<char>(127));
    for (int s = 56; s >= 0; s -= 8) f.push_back(static_cast<char>((static_cast<std::uint64_t>(n) >> s) & 0xff));
  }
  f.append(payload);
  return f;
}

Server::Server(ServerOptions options, Framing framing)
    : options_(std::move(options)), framing_(framing) {
  if (!options_.catalog) throw std::invalid_argument("Server: catalog required");
}

Server::~Server() {
  stop();
  while (active_.load() > 0) std::this_thread::sleep_for(std::chrono::milliseconds(5));
  if (listen_fd_ >= 0) ::close(listen_fd_);
}

int Server::bind() {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw std::runtime_error("socket() failed");
  const int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(options_.port));
  if (::inet_pton(AF_INET, options_.host.c_str(), &addr.sin_addr) != 1) {
    throw std::runtime_error("bad listen address " + options_.host);
  }
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    throw std::runtime_error("cannot bind " + options_.host + ":" + std::to_string(options_.port) +
                             ": " + std::strerror(errno));
  }
  if (::listen(listen_fd_, 16) != 0) throw std::runtime_error("listen() failed");
  socklen_t len = sizeof addr;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  return ntohs(addr.sin_port);
}

void Server::run() {
  if (listen_fd_ < 0) bind();
  while (!stopping_.load()) {
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (stopping_.load()) break;
      if (errno == EINTR) continue;
      break;
    }
    {
      std::lock_guard lock(conn_mutex_);
      connections_.insert(fd);
    }
    ++active_;
    std::thread([this, fd] {
      handle_connection(fd);
      {
        std::lock_guard lock(conn_mutex_);
        connections_.erase(fd);
      }
      ::close(fd);
      --active_;
    }).detach();
  }
}

void Server::stop() {
  if (stopping_.exchange(true)) return;
  if (listen_fd_ >= 0) ::shutdown(listen_fd_, SHUT_RDWR);
  std::lock_guard lock(conn_mutex_);
  for (int fd : connections_) ::shutdown(fd, SHUT_RDWR);
}

void Server::handle_connection(int fd) {
  protocol::Session session(options_.catalog, options_.session);
  Reader reader(fd);
  std::string msg;
  if (framing_ == Framing::Lines) {
    while (!session.closed() && reader.line(msg)) {
      if (msg.find_first_not_of(" \t") == std::string::npos) continue;
      if (!send_all(fd, session.handle(msg) + "\n")) return;
    }
    return;
  }
  if (!websocket_handshake(fd, reader)) return;
  while (!session.closed() && websocket_read(fd, reader, msg)) {
    while (!msg.empty() && (msg.back() == '\n' || msg.back() == '\r')) msg.pop_back();
    if (!send_all(fd, websocket_frame(session.handle(msg)))) return;
  }
  if (session.closed()) send_all(fd, websocket_frame({}, 0x8));
}

bool serve_http(const std::filesystem::path& root, const std::string& host, int port) {
  httplib::Server http;
  if (!http.set_mount_point("/", root.string())) return false;
  return http.listen(host, port);
}

} // namespace helitack::serve
