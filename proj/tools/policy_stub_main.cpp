// Reference policy server: echoes the debug oracle letter, or a fixed letter, or "A".

#include <iostream>

#include "CLI11.hpp"
#include "fnav/policy.hpp"

int main(int argc, char** argv) {
  CLI::App app{"fnav-policy-stub: minimal external policy endpoint"};
  fnav::policy::StubServer::Options opts;
  opts.port = 8765;
  std::string letter;
  app.add_option("--host", opts.host, "Bind address");
  app.add_option("--port", opts.port, "Port (0 picks a free one)");
  app.add_option("--letter", letter, "Reply with this letter when no debug letter is sent");
  app.add_option("--delay-ms", opts.delay_ms, "Sleep before replying");
  app.add_option("--status", opts.status, "HTTP status to reply with");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  if (!letter.empty()) opts.fixed_letter = letter;

  try {
    fnav::policy::StubServer server(opts);
    std::cout << "listening on " << server.url() << std::endl;
    server.run();
  } catch (const std::exception& e) {
    std::cerr << "fnav-policy-stub: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
