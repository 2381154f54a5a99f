#include "xrpt/sut/external_sut.hpp"

#include <boost/asio.hpp>
#include <boost/process.hpp>
#include <istream>
#include <ostream>
#include <regex>

#include "xrpt/error.hpp"

namespace xrpt {

namespace bp = boost::process;
namespace asio = boost::asio;

nlohmann::json message_to_json(const Message& msg) {
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [k, v] : msg.params) params[k] = v;
  return {{"label", msg.label}, {"params", params}};
}

Message message_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("label") || !doc["label"].is_string())
    throw SutIoError("message without a string \"label\": " + doc.dump());
  Message msg{doc["label"].get<std::string>(), {}};
  if (doc.contains("params")) {
    if (!doc["params"].is_object()) throw SutIoError("\"params\" is not an object: " + doc.dump());
    for (const auto& [k, v] : doc["params"].items()) {
      if (!v.is_number_integer()) throw SutIoError("parameter '" + k + "' is not an integer");
      msg.params[k] = v.get<std::int64_t>();
    }
  }
  return msg;
}

nlohmann::json LineProtocolSut::round_trip(const nlohmann::json& request) {
  out() << request.dump() << '\n';
  out().flush();
  if (!out()) throw SutIoError("cannot write to the SUT");
  std::string line;
  if (!std::getline(in(), line)) throw SutIoError("SUT closed the connection");
  try {
    return nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw SutIoError(std::string("malformed SUT reply: ") + e.what());
  }
}

void LineProtocolSut::reset() {
  const nlohmann::json reply = round_trip({{"reset", true}});
  if (reply != nlohmann::json{{"ok", true}}) throw SutIoError("unexpected reset acknowledgement: " + reply.dump());
}

Message LineProtocolSut::send(const Message& input) { return message_from_json(round_trip(message_to_json(input))); }

struct ProcessSut::Impl {
  bp::opstream to_child;
  bp::ipstream from_child;
  bp::child child;
};

ProcessSut::ProcessSut(const std::string& command) : impl_(std::make_unique<Impl>()) {
  try {
    impl_->child = bp::child("/bin/sh", "-c", command, bp::std_in < impl_->to_child, bp::std_out > impl_->from_child);
  } catch (const bp::process_error& e) {
    throw SutIoError(std::string("cannot start SUT process: ") + e.what());
  }
}

ProcessSut::~ProcessSut() {
  impl_->to_child.pipe().close();
  std::error_code ec;
  if (!impl_->child.wait_for(std::chrono::seconds(2), ec)) impl_->child.terminate(ec);
}

std::ostream& ProcessSut::out() { return impl_->to_child; }
std::istream& ProcessSut::in() { return impl_->from_child; }

struct TcpSut::Impl {
  asio::ip::tcp::iostream stream;
};

TcpSut::TcpSut(const std::string& host, std::uint16_t port) : impl_(std::make_unique<Impl>()) {
  impl_->stream.connect(host, std::to_string(port));
  if (!impl_->stream) throw SutIoError("cannot connect to " + host + ":" + std::to_string(port) + ": " +
                                       impl_->stream.error().message());
}

TcpSut::~TcpSut() = default;

std::ostream& TcpSut::out() { return impl_->stream; }
std::istream& TcpSut::in() { return impl_->stream; }

std::unique_ptr<SutPort> connect_sut(const std::string& endpoint) {
  static const std::regex pattern(R"(tcp://([^:/]+):(\d{1,5}))");
  std::smatch match;
  if (!std::regex_match(endpoint, match, pattern)) throw SutIoError("endpoint must look like tcp://host:port");
  const unsigned long port = std::stoul(match[2].str());
  if (port == 0 || port > 65535) throw SutIoError("port out of range in " + endpoint);
  return std::make_unique<TcpSut>(match[1].str(), static_cast<std::uint16_t>(port));
}

void serve_line_protocol(SutPort& sut, std::istream& in, std::ostream& out) {
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json reply;
    try {
      const nlohmann::json request = nlohmann::json::parse(line);
      if (request.is_object() && request.contains("reset")) {
        sut.reset();
        reply = {{"ok", true}};
      } else {
        reply = message_to_json(sut.send(message_from_json(request)));
      }
    } catch (const std::exception& e) {
      reply = {{"error", e.what()}};
    }
    out << reply.dump() << '\n';
    out.flush();
  }
}

void serve_tcp(SutPort& sut, std::uint16_t port, std::size_t connections,
               const std::function<void(std::uint16_t)>& on_listen) {
  asio::io_context io;
  asio::ip::tcp::acceptor acceptor(io, asio::ip::tcp::endpoint(asio::ip::tcp::v4(), port));
  if (on_listen) on_listen(acceptor.local_endpoint().port());
  for (std::size_t served = 0; connections == 0 || served < connections; ++served) {
    asio::ip::tcp::iostream stream;
    acceptor.accept(stream.socket());
    sut.reset();
    serve_line_protocol(sut, stream, stream);
  }
}

}  // namespace xrpt
