#pragma once

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "treq/common.hpp"

namespace treq::tools {

/// Bad invocation or missing input; exits with status 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

inline void require_file(const std::string& path) {
  if (!std::filesystem::is_regular_file(path)) throw UsageError("no such file: " + path);
}

inline std::ifstream open_in(const std::string& path) {
  require_file(path);
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  return in;
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  return out;
}

inline std::string command_line(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i > 0) s += ' ';
    s += argv[i];
  }
  return s;
}

/// Parses arguments and runs `body`, mapping failures onto exit codes:
/// 2 for usage errors and missing inputs, 1 for everything else.
template <class Fn>
int run(CLI::App& app, int argc, char** argv, Fn&& body) {
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  try {
    return body();
  } catch (const UsageError& e) {
    std::cerr << app.get_name() << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << app.get_name() << ": " << e.what() << '\n';
    return 1;
  }
}

inline std::string clusters_path(const std::string& prefix) { return prefix + ".clusters.tsv"; }
inline std::string edges_path(const std::string& prefix) { return prefix + ".edges.tsv"; }

}  // namespace treq::tools
