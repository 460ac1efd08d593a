#include "fixtures.hpp"

#include "helitack/serve.hpp"

#include <doctest.h>
#include <json.hpp>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <thread>

using namespace helitack;

namespace {

int connect_to(int port) {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  ::inet_pton(AF_INET, "127.0.0.1", &addr.sin_addr);
  REQUIRE(::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0);
  return fd;
}

void send_str(int fd, const std::string& s) { REQUIRE(::send(fd, s.data(), s.size(), 0) == static_cast<ssize_t>(s.size())); }

std::string recv_n(int fd, std::size_t n) {
  std::string out;
  char buf[4096];
  while (out.size() < n) {
    const ssize_t k = ::recv(fd, buf, std::min(sizeof buf, n - out.size()), 0);
    if (k <= 0) break;
    out.append(buf, static_cast<std::size_t>(k));
  }
  return out;
}

std::string recv_line(int fd) {
  std::string out;
  char c;
  while (::recv(fd, &c, 1, 0) == 1 && c != '\n') out.push_back(c);
  return out;
}

// Client frames are masked.
std::string client_frame(const std::string& payload) {
  std::string f;
  f.push_back(static_cast<char>(0x81));
  const unsigned char mask[4] = {0x12, 0x34, 0x56, 0x78};
  if (payload.size() < 126) {
    f.push_back(static_cast<char>(0x80 | payload.size()));
  } else {
    f.push_back(static_cast<char>(0x80 | 126));
    f.push_back(static_cast<char>(payload.size() >> 8));
    f.push_back(static_cast<char>(payload.size() & 0xff));
  }
  f.append(reinterpret_cast<const char*>(mask), 4);
  for (std::size_t i = 0; i < payload.size(); ++i) f.push_back(static_cast<char>(payload[i] ^ mask[i % 4]));
  return f;
}

std::string read_ws_message(int fd) {
  const std::string hdr = recv_n(fd, 2);
  REQUIRE(hdr.size() == 2);
  std::uint64_t len = static_cast<std::uint8_t>(hdr[1]) & 0x7f;
  if (len >= 126) {
    const std::string ext = recv_n(fd, len == 126 ? 2 : 8);
    len = 0;
    for (char c : ext) len = (len << 8) | static_cast<std::uint8_t>(c);
  }
  return recv_n(fd, static_cast<std::size_t>(len));
}

serve::ServerOptions options() {
  serve::ServerOptions o;
  o.catalog = testing::shared_catalog();
  o.session.base_dir = HELITACK_TEST_DATA;
  return o;
}

} // namespace

TEST_CASE("websocket accept key") {
  CHECK(serve::websocket_accept("dGhlIHNhbXBsZSBub25jZQ==") == "s3pPLMBiTxaQ9kYGzzhZRbK+xOo=");
}

TEST_CASE("websocket frame lengths") {
  CHECK(serve::websocket_frame("hi").size() == 4);
  CHECK(serve::websocket_frame(std::string(300, 'x')).size() == 304);
  CHECK(serve::websocket_frame(std::string(70000, 'x')).size() == 70010);
}

TEST_CASE("line socket transport") {
  serve::Server server(options(), serve::Server::Framing::Lines);
  const int port = server.bind();
  std::thread t([&] { server.run(); });
  const int fd = connect_to(port);
  send_str(fd, "{\"cmd\":\"reset\",\"scenario_path\":\"point_fire.json\",\"downsample\":true}\n");
  auto rep = nlohmann::json::parse(recv_line(fd));
  CHECK(rep["ok"] == true);
  CHECK(rep["obs"]["width"] == 16);
  send_str(fd, "{\"cmd\":\"step\",\"action\":1}\n{\"cmd\":\"close\"}\n");
  rep = nlohmann::json::parse(recv_line(fd));
  CHECK(rep["info"]["step"] == 1);
  rep = nlohmann::json::parse(recv_line(fd));
  CHECK(rep["closed"] == true);
  ::close(fd);
  server.stop();
  t.join();
}

TEST_CASE("websocket transport") {
  serve::Server server(options(), serve::Server::Framing::WebSocket);
  const int port = server.bind();
  std::thread t([&] { server.run(); });
  const int fd = connect_to(port);
  send_str(fd, "GET / HTTP/1.1\r\nHost: localhost\r\nUpgrade: websocket\r\nConnection: Upgrade\r\n"
               "Sec-WebSocket-Key: dGhlIHNhbXBsZSBub25jZQ==\r\nSec-WebSocket-Version: 13\r\n\r\n");
  std::string head;
  while (head.find("\r\n\r\n") == std::string::npos) {
    const std::string c = recv_n(fd, 1);
    REQUIRE(c.size() == 1);
    head += c;
  }
  CHECK(head.find("101") != std::string::npos);
  CHECK(head.find("s3pPLMBiTxaQ9kYGzzhZRbK+xOo=") != std::string::npos);

  send_str(fd, client_frame("{\"cmd\":\"reset\",\"scenario_path\":\"point_fire.json\"}"));
  auto rep = nlohmann::json::parse(read_ws_message(fd));
  CHECK(rep["ok"] == true);
  CHECK(rep["obs"]["height"] == 24);
  send_str(fd, client_frame("{\"cmd\":\"step\",\"action\":9}"));
  rep = nlohmann::json::parse(read_ws_message(fd));
  CHECK(rep["error"] == "bad_action");
  ::close(fd);
  server.stop();
  t.join();
}
