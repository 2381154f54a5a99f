#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "xrpt/sut/sut_port.hpp"

namespace xrpt {

/// Wire form {"label": ..., "params": {...}}.
nlohmann::json message_to_json(const Message& msg);
/// Throws SutIoError on a malformed document.
Message message_from_json(const nlohmann::json& doc);

/// SUT reached over a newline-delimited JSON stream. Reset is {"reset": true}
/// acknowledged by {"ok": true}. I/O and protocol errors raise SutIoError.
class LineProtocolSut : public SutPort {
 public:
  void reset() override;
  Message send(const Message& input) override;

 protected:
  virtual std::ostream& out() = 0;
  virtual std::istream& in() = 0;

 private:
  nlohmann::json round_trip(const nlohmann::json& request);
};

/// Child process speaking the protocol on its standard input and output.
/// The command line is run through /bin/sh.
class ProcessSut : public LineProtocolSut {
 public:
  explicit ProcessSut(const std::string& command);
  ~ProcessSut() override;

 protected:
  std::ostream& out() override;
  std::istream& in() override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// TCP peer speaking the protocol.
class TcpSut : public LineProtocolSut {
 public:
  TcpSut(const std::string& host, std::uint16_t port);
  ~TcpSut() override;

 protected:
  std::ostream& out() override;
  std::istream& in() override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Opens "tcp://host:port". Throws SutIoError.
std::unique_ptr<SutPort> connect_sut(const std::string& endpoint);

/// Answers protocol requests from `in` with `sut` until end of input.
void serve_line_protocol(SutPort& sut, std::istream& in, std::ostream& out);
/// Accepts connections on `port` one at a time and serves each until it
/// closes. Stops after `connections` connections when non-zero. `on_listen`
/// receives the bound port.
void serve_tcp(SutPort& sut, std::uint16_t port, std::size_t connections,
               const std::function<void(std::uint16_t)>& on_listen = {});

}  // namespace xrpt
