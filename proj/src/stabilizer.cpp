#include "qcl/stabilizer.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qcl/errors.hpp"
#include "qcl/gf2.hpp"

namespace qcl {

namespace {

constexpr int kMaxExhaustiveQubits = 12;

// Column j of the result is generator j; rows are x bits then z bits.
gf2::Matrix span_matrix(std::span<const PauliString> gens, int n) {
  gf2::Matrix a(2 * n, static_cast<int>(gens.size()));
  for (std::size_t j = 0; j < gens.size(); ++j) {
    for (int q = 0; q < n; ++q) {
      a.rows[q][j] = (gens[j].x_bits() >> q) & 1U;
      a.rows[n + q][j] = (gens[j].z_bits() >> q) & 1U;
    }
  }
  return a;
}

gf2::Row bits_of(const PauliString& p) {
  const int n = p.num_qubits();
  gf2::Row b(2 * n);
  for (int q = 0; q < n; ++q) {
    b[q] = (p.x_bits() >> q) & 1U;
    b[n + q] = (p.z_bits() >> q) & 1U;
  }
  return b;
}

PauliString from_bits(const gf2::Row& b, int n) {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  for (int q = 0; q < n; ++q) {
    if (b[q]) x |= std::uint64_t{1} << q;
    if (b[n + q]) z |= std::uint64_t{1} << q;
  }
  return {n, x, z, 0};
}

bool span_contains(std::span<const PauliString> gens, const PauliString& p) {
  if (gens.empty()) return p.is_identity();
  return gf2::solve(span_matrix(gens, p.num_qubits()), bits_of(p)).has_value();
}

// Does some element of p * <gens> have no bits of the given kind?
bool coset_has_pure(std::span<const PauliString> gens, const PauliString& p, char type) {
  const int n = p.num_qubits();
  const gf2::Matrix full = span_matrix(gens, n);
  gf2::Matrix a(n, full.cols);
  gf2::Row b(n);
  const int off = type == 'Z' ? 0 : n;  // pure Z means the x bits vanish
  const std::uint64_t bits = type == 'Z' ? p.x_bits() : p.z_bits();
  for (int q = 0; q < n; ++q) {
    a.rows[q] = full.rows[off + q];
    b[q] = (bits >> q) & 1U;
  }
  if (gens.empty()) return bits == 0;
  return gf2::solve(a, b).has_value();
}

// Ordering key per qubit: X < Y < Z < I.
std::array<int, 64> letter_key(const PauliString& p) {
  std::array<int, 64> k{};
  for (int q = 0; q < p.num_qubits(); ++q) {
    switch (p.letter(q)) {
      case 'X': k[q] = 0; break;
      case 'Y': k[q] = 1; break;
      case 'Z': k[q] = 2; break;
      default: k[q] = 3; break;
    }
  }
  return k;
}

bool is_pure(const PauliString& p, char type) {
  if (type == 'Z') return p.x_bits() == 0;
  if (type == 'X') return p.z_bits() == 0;
  return false;
}

bool better(const PauliString& a, const PauliString& b, char prefer) {
  if (a.weight() != b.weight()) return a.weight() < b.weight();
  const bool pa = is_pure(a, prefer);
  const bool pb = is_pure(b, prefer);
  if (pa != pb) return pa;
  return letter_key(a) < letter_key(b);
}

PauliString product_of(std::span<const PauliString> gens, std::uint64_t mask, int n) {
  PauliString acc(n);
  for (std::size_t j = 0; j < gens.size(); ++j) {
    if ((mask >> j) & 1U) acc = acc * gens[j];
  }
  return acc;
}

PauliString min_rep(std::span<const PauliString> gens, const PauliString& p, char prefer) {
  const int n = p.num_qubits();
  if (n > kMaxExhaustiveQubits) {
    throw CapExceeded(fmt::format("coset search on {} qubits exceeds the cap of {}", n, kMaxExhaustiveQubits));
  }
  PauliString best = p;
  const std::uint64_t count = std::uint64_t{1} << gens.size();
  for (std::uint64_t mask = 1; mask < count; ++mask) {
    PauliString cand = p * product_of(gens, mask, n);
    if (better(cand, best, prefer)) best = cand;
  }
  return best;
}

void validate_generators(std::span<const PauliString> gens) {
  if (gens.empty()) throw std::invalid_argument("stabilizer group needs at least one generator");
  const int n = gens.front().num_qubits();
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (gens[i].num_qubits() != n) throw std::invalid_argument("generators have different lengths");
    if (!gens[i].is_hermitian()) {
      throw std::invalid_argument(fmt::format("generator {} ({}) is not Hermitian", i, gens[i].str()));
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (!commutes(gens[i], gens[j])) {
        throw std::invalid_argument(
            fmt::format("generators {} ({}) and {} ({}) anticommute", j, gens[j].str(), i, gens[i].str()));
      }
    }
  }
  if (gf2::rank(span_matrix(gens, n)) != static_cast<int>(gens.size())) {
    throw std::invalid_argument("generators are not independent over GF(2)");
  }
  if (static_cast<int>(gens.size()) != n - 1) {
    throw std::invalid_argument(
        fmt::format("{} generators on {} qubits: only one logical qubit is supported", gens.size(), n));
  }
}

}  // namespace

std::uint64_t region_mask(int n, std::span<const int> region) {
  std::uint64_t m = 0;
  for (int q : region) {
    if (q < 0 || q >= n) throw std::out_of_range(fmt::format("qubit {} out of range for {} qubits", q, n));
    m |= std::uint64_t{1} << q;
  }
  return m;
}

LogicalPair logical_operators(std::span<const PauliString> gens) {
  validate_generators(gens);
  const int n = gens.front().num_qubits();
  // Normalizer: symplectic orthogonal complement of the generators.
  gf2::Matrix constraints(static_cast<int>(gens.size()), 2 * n);
  for (std::size_t j = 0; j < gens.size(); ++j) {
    for (int q = 0; q < n; ++q) {
      constraints.rows[j][q] = (gens[j].z_bits() >> q) & 1U;
      constraints.rows[j][n + q] = (gens[j].x_bits() >> q) & 1U;
    }
  }
  std::vector<PauliString> extended(gens.begin(), gens.end());
  std::vector<PauliString> found;
  for (const auto& v : gf2::nullspace(constraints)) {
    PauliString p = from_bits(v, n);
    if (span_contains(extended, p)) continue;
    if (found.size() == 1 && commutes(found[0], p)) continue;
    found.push_back(p);
    extended.push_back(p);
    if (found.size() == 2) break;
  }
  if (found.size() != 2) throw std::runtime_error("symplectic pairing of logical operators failed");
  const std::array<PauliString, 3> cosets = {found[0], found[1], found[0] * found[1]};
  int zi = 0;
  for (int i = 0; i < 3; ++i) {
    if (coset_has_pure(gens, cosets[i], 'Z')) {
      zi = i;
      break;
    }
  }
  int xi = -1;
  for (int i = 0; i < 3; ++i) {
    if (i != zi && coset_has_pure(gens, cosets[i], 'X')) {
      xi = i;
      break;
    }
  }
  if (xi < 0) xi = zi == 0 ? 1 : 0;
  return {min_rep(gens, cosets[xi], 'X').letters_only(), min_rep(gens, cosets[zi], 'Z').letters_only()};
}

StabilizerGroup::StabilizerGroup(std::vector<PauliString> generators) {
  auto logicals = logical_operators(generators);
  *this = StabilizerGroup(std::move(generators), std::move(logicals.x), std::move(logicals.z));
}

StabilizerGroup::StabilizerGroup(std::vector<PauliString> generators, PauliString logical_x,
                                 PauliString logical_z)
    : gens_(std::move(generators)), lx_(std::move(logical_x)), lz_(std::move(logical_z)) {
  validate_generators(gens_);
  n_ = gens_.front().num_qubits();
  for (const PauliString* l : {&lx_, &lz_}) {
    if (l->num_qubits() != n_) throw std::invalid_argument("logical operator has the wrong length");
    if (!l->is_hermitian()) throw std::invalid_argument(fmt::format("logical {} is not Hermitian", l->str()));
    for (const auto& g : gens_) {
      if (!commutes(*l, g)) {
        throw std::invalid_argument(fmt::format("logical {} anticommutes with generator {}", l->str(), g.str()));
      }
    }
    if (span_contains(gens_, *l)) {
      throw std::invalid_argument(fmt::format("logical {} lies in the stabilizer group", l->str()));
    }
  }
  if (commutes(lx_, lz_)) throw std::invalid_argument("logical X and Z commute");
}

StabilizerGroup StabilizerGroup::parse(std::span<const std::string> generators) {
  std::vector<PauliString> gens;
  gens.reserve(generators.size());
  for (const auto& g : generators) gens.push_back(PauliString::parse(g));
  return StabilizerGroup(std::move(gens));
}

PauliString StabilizerGroup::element(std::uint64_t mask) const { return product_of(gens_, mask, n_); }

bool StabilizerGroup::in_span(const PauliString& p) const {
  if (p.num_qubits() != n_) throw std::invalid_argument("Pauli length differs from the code length");
  return span_contains(gens_, p);
}

bool StabilizerGroup::contains(const PauliString& p) const {
  if (p.num_qubits() != n_) throw std::invalid_argument("Pauli length differs from the code length");
  const auto sol = gf2::solve(span_matrix(gens_, n_), bits_of(p));
  if (!sol) return false;
  std::uint64_t mask = 0;
  for (std::size_t j = 0; j < sol->size(); ++j) {
    if ((*sol)[j]) mask |= std::uint64_t{1} << j;
  }
  return element(mask) == p;
}

bool StabilizerGroup::in_normalizer(const PauliString& p) const {
  return std::all_of(gens_.begin(), gens_.end(), [&](const PauliString& g) { return commutes(g, p); });
}

LogicalPair logical_operators(const StabilizerGroup& s) { return logical_operators(s.generators()); }

PauliString min_weight_representative(const StabilizerGroup& s, const PauliString& p, char prefer) {
  return min_rep(s.generators(), p, prefer);
}

int code_distance(const StabilizerGroup& s) {
  const int n = s.num_qubits();
  if (n > kMaxExhaustiveQubits) {
    throw CapExceeded(fmt::format("distance search on {} qubits exceeds the cap of {}", n, kMaxExhaustiveQubits));
  }
  int found = -1;
  for_each_pauli_up_to_weight(n, n, [&](const PauliString& p) {
    if (p.is_identity() || !s.in_normalizer(p) || s.in_span(p)) return true;
    found = p.weight();
    return false;
  });
  if (found < 0) throw std::logic_error("no logical operator found");
  return found;
}

bool is_cleanable(const StabilizerGroup& s, std::span<const int> region) {
  const int n = s.num_qubits();
  const std::uint64_t rmask = region_mask(n, region);
  std::vector<int> in;
  std::vector<int> out;
  for (int q = 0; q < n; ++q) ((rmask >> q) & 1U ? in : out).push_back(q);
  const auto& gens = s.generators();
  const int r = static_cast<int>(in.size());
  // Paulis supported on the region that commute with all generators.
  gf2::Matrix comm(static_cast<int>(gens.size()), 2 * r);
  for (std::size_t j = 0; j < gens.size(); ++j) {
    for (int i = 0; i < r; ++i) {
      comm.rows[j][i] = (gens[j].z_bits() >> in[i]) & 1U;
      comm.rows[j][r + i] = (gens[j].x_bits() >> in[i]) & 1U;
    }
  }
  const int normalizer_dim = 2 * r - gf2::rank(comm);
  // Stabilizer elements supported on the region.
  const int c = static_cast<int>(out.size());
  gf2::Matrix off(2 * c, static_cast<int>(gens.size()));
  for (std::size_t j = 0; j < gens.size(); ++j) {
    for (int i = 0; i < c; ++i) {
      off.rows[i][j] = (gens[j].x_bits() >> out[i]) & 1U;
      off.rows[c + i][j] = (gens[j].z_bits() >> out[i]) & 1U;
    }
  }
  const int stab_dim = static_cast<int>(gens.size()) - gf2::rank(off);
  return normalizer_dim == stab_dim;
}

PauliString clean_operator(const StabilizerGroup& s, const PauliString& p, std::span<const int> region) {
  const int n = s.num_qubits();
  if (p.num_qubits() != n) throw std::invalid_argument("Pauli length differs from the code length");
  if (!s.in_normalizer(p)) throw std::invalid_argument(fmt::format("{} is not a logical operator", p.str()));
  if (!is_cleanable(s, region)) throw NotCleanable("region is not cleanable");
  const std::uint64_t rmask = region_mask(n, region);
  std::vector<int> in;
  for (int q = 0; q < n; ++q) {
    if ((rmask >> q) & 1U) in.push_back(q);
  }
  const auto& gens = s.generators();
  const int r = static_cast<int>(in.size());
  gf2::Matrix a(2 * r, static_cast<int>(gens.size()));
  gf2::Row b(2 * r);
  for (int i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < gens.size(); ++j) {
      a.rows[i][j] = (gens[j].x_bits() >> in[i]) & 1U;
      a.rows[r + i][j] = (gens[j].z_bits() >> in[i]) & 1U;
    }
    b[i] = (p.x_bits() >> in[i]) & 1U;
    b[r + i] = (p.z_bits() >> in[i]) & 1U;
  }
  const auto sol = gf2::solve_lex_min(a, b);
  if (!sol) throw NotCleanable(fmt::format("no stabilizer clears {} off the region", p.str()));
  std::uint64_t mask = 0;
  for (std::size_t j = 0; j < sol->size(); ++j) {
    if ((*sol)[j]) mask |= std::uint64_t{1} << j;
  }
  PauliString q = p * s.element(mask);
  if (q.support() & rmask) throw std::logic_error("cleaning left support on the region");
  return q;
}

std::pair<Vector, Vector> codewords(const StabilizerGroup& s) {
  const int n = s.num_qubits();
  check_state_cap(n);
  const Eigen::Index d = Eigen::Index{1} << n;
  std::vector<PauliString> projectors = s.generators();
  projectors.push_back(s.logical_z());
  Vector zero;
  for (Eigen::Index b = 0; b < d; ++b) {
    Vector v = Vector::Zero(d);
    v(b) = 1.0;
    for (const auto& g : projectors) v = (v + g.apply(v)) / 2.0;
    if (v.norm() > 1e-6) {
      zero = v.normalized();
      break;
    }
  }
  if (zero.size() == 0) throw std::logic_error("empty codespace");
  Eigen::Index lead = 0;
  zero.cwiseAbs().maxCoeff(&lead);
  for (Eigen::Index i = 0; i < d; ++i) {
    if (std::abs(zero(i)) > std::abs(zero(lead)) - 1e-12) {
      lead = i;
      break;
    }
  }
  zero *= std::conj(zero(lead)) / std::abs(zero(lead));
  Vector one = s.logical_x().apply(zero);
  return {zero, one};
}

}  // namespace qcl
