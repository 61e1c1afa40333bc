#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qcl::cli {

// Exit codes: 0 verified, 1 verification failed, 2 usage or input error.
inline constexpr int kOk = 0;
inline constexpr int kFailed = 1;
inline constexpr int kUsage = 2;

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Scheme file: "key: value" lines with keys code, n_sent, withheld (comma
// list), p, m, seed, ancillas. '#' starts a comment.
struct SchemeConfig {
  std::string code = "five_qubit";
  int n_sent = -1;
  std::vector<int> withheld;
  bool has_withheld = false;
  int p = 1;
  int m = 2;
  unsigned long long seed = 1;
  int ancillas = 2;
};

SchemeConfig parse_scheme_config(const std::string& text, const std::string& source = "<input>");

}  // namespace qcl::cli
