#include "qcl/code_io.hpp"

#include <fmt/format.h>

#include <bit>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "qcl/errors.hpp"
#include "qcl/tolerance.hpp"

namespace qcl {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument(fmt::format("'{}' is not a number", s));
  }
  return v;
}

struct Line {
  int number;
  std::string_view text;
};

}  // namespace

cplx parse_complex(std::string_view token) {
  token = trim(token);
  const auto comma = token.find(',');
  if (comma == std::string_view::npos) return {parse_double(token), 0.0};
  return {parse_double(token.substr(0, comma)), parse_double(token.substr(comma + 1))};
}

std::vector<cplx> parse_complex_row(std::string_view line) {
  std::vector<cplx> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(parse_complex(line.substr(i, j - i)));
    i = j;
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CodeSpace parse_code(const std::string& text, const std::string& source) {
  std::vector<std::string> raw_lines;
  {
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) raw_lines.push_back(std::move(l));
  }
  std::vector<Line> lines;
  for (std::size_t i = 0; i < raw_lines.size(); ++i) {
    std::string_view raw = raw_lines[i];
    const auto hash = raw.find('#');
    if (hash != std::string_view::npos) raw = raw.substr(0, hash);
    raw = trim(raw);
    if (!raw.empty()) lines.push_back({static_cast<int>(i) + 1, raw});
  }
  auto fail = [&](int line, const std::string& what) { return ParseError(source, line, what); };

  std::string name = std::filesystem::path(source).stem().string();
  std::optional<int> distance;
  std::vector<Line> gens;
  std::vector<Line> amps;
  std::optional<Line> lx_line;
  std::optional<Line> lz_line;
  int stab_header = 0;
  int amp_header = 0;
  enum class Mode { none, stabilizer, amplitudes } mode = Mode::none;

  for (const auto& ln : lines) {
    const auto colon = ln.text.find(':');
    if (colon != std::string_view::npos) {
      const std::string_view key = trim(ln.text.substr(0, colon));
      const std::string_view value = trim(ln.text.substr(colon + 1));
      mode = Mode::none;
      if (key == "name") {
        name = std::string(value);
      } else if (key == "distance") {
        try {
          distance = static_cast<int>(parse_double(value));
        } catch (const std::exception& e) {
          throw fail(ln.number, e.what());
        }
      } else if (key == "stabilizer") {
        if (stab_header || amp_header) throw fail(ln.number, "code already defined");
        stab_header = ln.number;
        mode = Mode::stabilizer;
        if (!value.empty()) gens.push_back({ln.number, value});
      } else if (key == "amplitudes") {
        if (stab_header || amp_header) throw fail(ln.number, "code already defined");
        amp_header = ln.number;
        mode = Mode::amplitudes;
      } else if (key == "logical_x") {
        lx_line = Line{ln.number, value};
      } else if (key == "logical_z") {
        lz_line = Line{ln.number, value};
      } else {
        throw fail(ln.number, fmt::format("unknown key '{}'", key));
      }
      continue;
    }
    switch (mode) {
      case Mode::stabilizer: gens.push_back(ln); break;
      case Mode::amplitudes: amps.push_back(ln); break;
      case Mode::none: throw fail(ln.number, fmt::format("unexpected line '{}'", ln.text));
    }
  }

  if (stab_header) {
    if (gens.empty()) throw fail(stab_header, "no generators listed");
    std::vector<PauliString> g;
    for (const auto& ln : gens) {
      try {
        g.push_back(PauliString::parse(ln.text));
      } catch (const std::exception& e) {
        throw fail(ln.number, e.what());
      }
      if (g.back().num_qubits() != g.front().num_qubits()) {
        throw fail(ln.number, fmt::format("generator has {} qubits, expected {}", g.back().num_qubits(),
                                          g.front().num_qubits()));
      }
      if (!g.back().is_hermitian()) throw fail(ln.number, "generator is not Hermitian");
      for (std::size_t j = 0; j + 1 < g.size(); ++j) {
        if (!commutes(g[j], g.back())) {
          throw fail(ln.number, fmt::format("generator anticommutes with the one on line {}", gens[j].number));
        }
      }
    }
    const int n = g.front().num_qubits();
    if (static_cast<int>(g.size()) != n - 1) {
      throw fail(stab_header, fmt::format("{} generators on {} qubits; exactly {} are needed for one logical qubit",
                                          g.size(), n, n - 1));
    }
    std::optional<StabilizerGroup> stab;
    try {
      if (lx_line || lz_line) {
        if (!(lx_line && lz_line)) {
          throw fail((lx_line ? lx_line : lz_line)->number, "give both logical_x and logical_z or neither");
        }
        PauliString lx;
        PauliString lz;
        try {
          lx = PauliString::parse(lx_line->text);
        } catch (const std::exception& e) {
          throw fail(lx_line->number, e.what());
        }
        try {
          lz = PauliString::parse(lz_line->text);
        } catch (const std::exception& e) {
          throw fail(lz_line->number, e.what());
        }
        stab.emplace(std::move(g), std::move(lx), std::move(lz));
      } else {
        stab.emplace(std::move(g));
      }
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw fail(lx_line ? lx_line->number : stab_header, e.what());
    }
    auto [zero, one] = codewords(*stab);
    return CodeSpace(name, std::move(zero), std::move(one), distance, std::move(stab));
  }

  if (amp_header) {
    if (amps.size() != 2) {
      throw fail(amp_header, fmt::format("expected 2 amplitude lines, found {}", amps.size()));
    }
    std::vector<Vector> states;
    for (const auto& ln : amps) {
      std::vector<cplx> row;
      try {
        row = parse_complex_row(ln.text);
      } catch (const std::exception& e) {
        throw fail(ln.number, e.what());
      }
      if (row.empty() || !std::has_single_bit(row.size())) {
        throw fail(ln.number, fmt::format("{} amplitudes is not a power of two", row.size()));
      }
      states.push_back(Eigen::Map<Vector>(row.data(), static_cast<Eigen::Index>(row.size())));
    }
    if (states[0].size() != states[1].size()) throw fail(amps[1].number, "amplitude lines differ in length");
    for (int i = 0; i < 2; ++i) {
      if (std::abs(states[i].norm() - 1.0) > tol::kStructural) {
        throw fail(amps[i].number, fmt::format("state has norm {:.12g}, expected 1", states[i].norm()));
      }
    }
    const double ov = std::abs(states[0].dot(states[1]));
    if (ov > tol::kStructural) {
      throw fail(amps[1].number, fmt::format("state overlaps the one on line {} by {:.3g}", amps[0].number, ov));
    }
    try {
      return CodeSpace(name, states[0], states[1], distance);
    } catch (const std::exception& e) {
      throw fail(amp_header, e.what());
    }
  }
  throw fail(lines.empty() ? 1 : lines.back().number, "no 'stabilizer:' or 'amplitudes:' section");
}

CodeSpace load_code_file(const std::string& path) { return parse_code(read_text_file(path), path); }

CodeSpace resolve_code(const std::string& name_or_path) {
  for (const auto& n : builtin_code_names()) {
    if (n == name_or_path) return builtin_code(n);
  }
  if (std::filesystem::is_regular_file(name_or_path)) return load_code_file(name_or_path);
  return builtin_code(name_or_path);
}

}  // namespace qcl
