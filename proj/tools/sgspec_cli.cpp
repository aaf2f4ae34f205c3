// Command line front end.  Subcommands are registered here; the numerics all
// live in the core library.
#include <CLI11.hpp>

#include <cstdio>
#include <exception>

#include "sgspec/types.hpp"

int main(int argc, char** argv) {
  CLI::App app{"spectral transform toolkit for periodic sinh-Gordon data"};
  app.require_subcommand(0, 1);

  auto* vt = app.add_subcommand("vacuum-table", "tabulate vacuum double points");
  int K = 8;
  vt->add_option("-K,--K", K, "index range");
  vt->callback([&] { std::printf("vacuum-table K=%d (not yet wired)\n", K); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 1 : 0;
  } catch (const sgspec::InputError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 1;
  } catch (const sgspec::NumericalError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 2;
  }
  return 0;
}
