#ifndef TORSION_FORGE_GROUPS_HPP
#define TORSION_FORGE_GROUPS_HPP

// Finite groups given by multiplication tables, their complex character
// tables, and the isotypical projection machinery built on top of them.

#include "torsion_forge/linalg.hpp"

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace tforge {

using ElementIndex = std::size_t;
using IrrepIndex = std::size_t;

/// Outcome of a validator: either ok, or the first violated condition with a
/// witness (element indices, degree, irrep indices, depending on the check).
struct Diagnostic {
  bool ok = true;
  std::string message;
  std::vector<std::size_t> witness;

  static Diagnostic pass() { return {}; }
  static Diagnostic fail(std::string msg, std::vector<std::size_t> w = {}) {
    return Diagnostic{false, std::move(msg), std::move(w)};
  }
  explicit operator bool() const { return ok; }
};

class FiniteGroup {
 public:
  FiniteGroup() = default;
  FiniteGroup(std::vector<std::string> labels, std::vector<std::vector<ElementIndex>> mult)
      : labels_(std::move(labels)), mult_(std::move(mult)) {
    derive_identity_and_inverses();
  }

  std::size_t order() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(ElementIndex g) const { return labels_.at(g); }
  const std::vector<std::vector<ElementIndex>>& table() const { return mult_; }

  ElementIndex mul(ElementIndex a, ElementIndex b) const { return mult_[a][b]; }
  ElementIndex identity() const { return identity_.value(); }
  ElementIndex inverse(ElementIndex g) const { return inverse_.at(g); }
  bool has_identity() const { return identity_.has_value(); }
  bool has_inverses() const { return inverse_.size() == labels_.size(); }

  ElementIndex index_of(const std::string& label) const {
    for (std::size_t k = 0; k < labels_.size(); ++k)
      if (labels_[k] == label) return k;
    throw Error(ErrorKind::invalid_input, "unknown group element '" + label + "'");
  }

 private:
  void derive_identity_and_inverses() {
    const std::size_t n = labels_.size();
    if (mult_.size() != n) return;
    for (const auto& row : mult_)
      if (row.size() != n) return;
    for (ElementIndex e = 0; e < n; ++e) {
      bool ok = true;
      for (ElementIndex g = 0; g < n && ok; ++g) ok = mult_[e][g] == g && mult_[g][e] == g;
      if (ok) {
        identity_ = e;
        break;
      }
    }
    if (!identity_) return;
    inverse_.clear();
    for (ElementIndex g = 0; g < n; ++g) {
      for (ElementIndex h = 0; h < n; ++h) {
        if (mult_[g][h] == *identity_ && mult_[h][g] == *identity_) {
          inverse_.push_back(h);
          break;
        }
      }
      if (inverse_.size() != g + 1) {
        inverse_.clear();
        return;
      }
    }
  }

  std::vector<std::string> labels_;
  std::vector<std::vector<ElementIndex>> mult_;
  std::optional<ElementIndex> identity_;
  std::vector<ElementIndex> inverse_;
};

struct Irrep {
  std::string name;
  int degree = 1;
  std::vector<cplx> values;  // one per group element
};

struct CharacterTable {
  std::vector<Irrep> irreps;

  std::size_t size() const { return irreps.size(); }
  const Irrep& operator[](IrrepIndex w) const { return irreps.at(w); }

  IrrepIndex index_of(const std::string& name) const {
    for (std::size_t k = 0; k < irreps.size(); ++k)
      if (irreps[k].name == name) return k;
    throw Error(ErrorKind::invalid_input, "unknown irreducible character '" + name + "'");
  }

  /// Index of the dual irrep W*, whose character is the complex conjugate.
  IrrepIndex dual(IrrepIndex w, double tol = 1e-8) const {
    const auto& vw = irreps.at(w).values;
    for (std::size_t k = 0; k < irreps.size(); ++k) {
      const auto& vk = irreps[k].values;
      bool same = vk.size() == vw.size();
      for (std::size_t g = 0; same && g < vw.size(); ++g) same = std::abs(vk[g] - std::conj(vw[g])) <= tol;
      if (same) return k;
    }
    throw Error(ErrorKind::validation, "character table is not closed under duality (irrep " +
                                           irreps.at(w).name + ")");
  }
  bool self_dual(IrrepIndex w) const { return dual(w) == w; }
};

/// A group together with its validated character table.
struct Symmetry {
  std::shared_ptr<const FiniteGroup> group;
  std::shared_ptr<const CharacterTable> characters;

  const FiniteGroup& g() const { return *group; }
  const CharacterTable& chars() const { return *characters; }
};

/// Irreps that must be handled together: a self-dual irrep on its own, or a
/// pair {W, W*} of mutually dual irreps. An invariant symmetric bilinear form
/// pairs the W-isotypical part with the W*-isotypical part, so only these
/// blocks carry nondegenerate restrictions.
struct IrrepBlock {
  std::vector<IrrepIndex> members;  // one entry, or {W, W*} with W < W*

  bool paired() const { return members.size() == 2; }
  bool operator<(const IrrepBlock& o) const { return members < o.members; }
  bool operator==(const IrrepBlock& o) const { return members == o.members; }
};

inline std::vector<IrrepBlock> irrep_blocks(const CharacterTable& t) {
  std::vector<IrrepBlock> out;
  for (IrrepIndex w = 0; w < t.size(); ++w) {
    IrrepIndex d = t.dual(w);
    if (d == w) out.push_back({{w}});
    else if (w < d) out.push_back({{w, d}});
  }
  return out;
}

inline std::string block_name(const CharacterTable& t, const IrrepBlock& b) {
  std::string s = t[b.members[0]].name;
  if (b.paired()) s += "+" + t[b.members[1]].name;
  return s;
}

/// Exponent attached to a block when a formal product is evaluated at g:
/// chi_W(g)/deg W for a self-dual irrep, Re chi_W(g)/deg W for a dual pair
/// (the pair value is shared symmetrically between W and W*).
inline cplx block_exponent(const CharacterTable& t, const IrrepBlock& b, ElementIndex g) {
  const Irrep& w = t[b.members[0]];
  cplx e = w.values.at(g) / static_cast<double>(w.degree);
  if (b.paired()) return {e.real(), 0.0};
  return e;
}

struct GroupRepresentation {
  std::shared_ptr<const FiniteGroup> group;
  std::vector<CMatrix> matrices;  // one per group element

  Eigen::Index dim() const { return matrices.empty() ? 0 : matrices.front().rows(); }
  const CMatrix& operator()(ElementIndex g) const { return matrices.at(g); }
};

inline Diagnostic validate_group(const FiniteGroup& g) {
  const std::size_t n = g.order();
  if (n == 0) return Diagnostic::fail("group has no elements");
  if (g.table().size() != n) return Diagnostic::fail("multiplication table has wrong number of rows");
  for (std::size_t a = 0; a < n; ++a) {
    if (g.table()[a].size() != n)
      return Diagnostic::fail("multiplication table row " + std::to_string(a) + " has wrong length", {a});
    for (std::size_t b = 0; b < n; ++b)
      if (g.table()[a][b] >= n)
        return Diagnostic::fail("table not closed: product out of range", {a, b});
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c)))
          return Diagnostic::fail("associativity fails for (" + g.label(a) + ", " + g.label(b) + ", " +
                                      g.label(c) + ")",
                                  {a, b, c});
  if (!g.has_identity()) return Diagnostic::fail("no identity element");
  if (!g.has_inverses()) return Diagnostic::fail("some element has no two-sided inverse");
  return Diagnostic::pass();
}

inline Diagnostic validate_characters(const FiniteGroup& g, const CharacterTable& t, double tol = 1e-10) {
  const std::size_t n = g.order();
  if (!g.has_identity()) return Diagnostic::fail("group has no identity");
  long long degree_squares = 0;
  for (std::size_t w = 0; w < t.size(); ++w) {
    const Irrep& ir = t[w];
    if (ir.values.size() != n)
      return Diagnostic::fail("character " + ir.name + " has wrong number of values", {w});
    if (ir.degree <= 0) return Diagnostic::fail("character " + ir.name + " has nonpositive degree", {w});
    if (ir.values[g.identity()] != cplx(ir.degree, 0.0))
      return Diagnostic::fail("character " + ir.name + " at identity differs from its degree", {w});
    degree_squares += static_cast<long long>(ir.degree) * ir.degree;
  }
  for (std::size_t v = 0; v < t.size(); ++v) {
    for (std::size_t w = v; w < t.size(); ++w) {
      cplx ip{0.0, 0.0};
      for (std::size_t k = 0; k < n; ++k) ip += t[v].values[k] * std::conj(t[w].values[k]);
      ip /= static_cast<double>(n);
      const double expected = v == w ? 1.0 : 0.0;
      if (std::abs(ip - expected) > tol) {
        return Diagnostic::fail("orthogonality violated for (" + t[v].name + ", " + t[w].name +
                                    "): inner product " + std::to_string(ip.real()) + "+" +
                                    std::to_string(ip.imag()) + "i",
                                {v, w});
      }
    }
  }
  if (degree_squares != static_cast<long long>(n))
    return Diagnostic::fail("sum of squared degrees " + std::to_string(degree_squares) + " != |G| = " +
                            std::to_string(n));
  return Diagnostic::pass();
}

inline Diagnostic validate_representation(const GroupRepresentation& rep, double tol = 1e-9) {
  const FiniteGroup& g = *rep.group;
  if (rep.matrices.size() != g.order()) return Diagnostic::fail("representation needs one matrix per element");
  const Eigen::Index d = rep.dim();
  for (std::size_t a = 0; a < g.order(); ++a)
    if (rep(a).rows() != d || rep(a).cols() != d)
      return Diagnostic::fail("representation matrix has wrong shape", {a});
  if ((rep(g.identity()) - identity(d)).norm() > tol * std::max<double>(1.0, std::sqrt(double(d))))
    return Diagnostic::fail("identity element is not represented by the identity matrix", {g.identity()});
  for (std::size_t a = 0; a < g.order(); ++a)
    for (std::size_t b = 0; b < g.order(); ++b) {
      const CMatrix lhs = rep(g.mul(a, b));
      const double err = (lhs - rep(a) * rep(b)).norm();
      if (err > tol * std::max(1.0, rep(a).norm() * rep(b).norm()))
        return Diagnostic::fail("homomorphism property fails", {a, b});
    }
  return Diagnostic::pass();
}

/// P_W = (deg W / |G|) sum_g conj(chi_W(g)) rho(g).
inline CMatrix isotypical_projector(const GroupRepresentation& rep, const Irrep& w) {
  const FiniteGroup& g = *rep.group;
  if (w.values.size() != g.order())
    throw Error(ErrorKind::invalid_input, "character " + w.name + " does not match the group order");
  CMatrix p = CMatrix::Zero(rep.dim(), rep.dim());
  for (ElementIndex k = 0; k < g.order(); ++k) p += std::conj(w.values[k]) * rep(k);
  p *= static_cast<double>(w.degree) / static_cast<double>(g.order());
  return p;
}

inline CMatrix block_projector(const GroupRepresentation& rep, const CharacterTable& t, const IrrepBlock& b) {
  CMatrix p = isotypical_projector(rep, t[b.members[0]]);
  if (b.paired()) p += isotypical_projector(rep, t[b.members[1]]);
  return p;
}

/// Number of copies of W in the representation; errors when the character
/// inner product is not within 1e-8 of an integer.
inline int multiplicity(const GroupRepresentation& rep, const Irrep& w) {
  const FiniteGroup& g = *rep.group;
  cplx s{0.0, 0.0};
  for (ElementIndex k = 0; k < g.order(); ++k) s += std::conj(w.values.at(k)) * rep(k).trace();
  s /= static_cast<double>(g.order());
  const double r = std::round(s.real());
  if (std::abs(s - cplx(r, 0.0)) > 1e-8)
    throw Error(ErrorKind::validation, "non-integer multiplicity " + std::to_string(s.real()) + " for " + w.name);
  return static_cast<int>(r);
}

/// Character of a representation, one value per element.
inline std::vector<cplx> character_of(const GroupRepresentation& rep) {
  std::vector<cplx> out;
  for (const auto& m : rep.matrices) out.push_back(m.trace());
  return out;
}

// ---------------------------------------------------------------------------
// Built-in groups with their character tables.

inline Symmetry trivial_group() {
  auto g = std::make_shared<FiniteGroup>(std::vector<std::string>{"e"},
                                         std::vector<std::vector<ElementIndex>>{{0}});
  auto t = std::make_shared<CharacterTable>();
  t->irreps.push_back({"trivial", 1, {cplx(1.0, 0.0)}});
  return {g, t};
}

/// Z/n with elements "0".."n-1" and characters chi_k(j) = exp(2 pi i jk/n).
inline Symmetry cyclic_group(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::invalid_input, "cyclic group of order 0");
  std::vector<std::string> labels;
  std::vector<std::vector<ElementIndex>> mult(n, std::vector<ElementIndex>(n));
  for (std::size_t a = 0; a < n; ++a) {
    labels.push_back(std::to_string(a));
    for (std::size_t b = 0; b < n; ++b) mult[a][b] = (a + b) % n;
  }
  auto t = std::make_shared<CharacterTable>();
  for (std::size_t k = 0; k < n; ++k) {
    Irrep ir{"chi" + std::to_string(k), 1, {}};
    for (std::size_t j = 0; j < n; ++j) {
      // exact values at the real points keep chi(identity) == degree exactly
      const std::size_t m = (j * k) % n;
      if (m == 0) ir.values.emplace_back(1.0, 0.0);
      else if (2 * m == n) ir.values.emplace_back(-1.0, 0.0);
      else ir.values.push_back(std::polar(1.0, 2.0 * std::numbers::pi * double(m) / double(n)));
    }
    t->irreps.push_back(std::move(ir));
  }
  return {std::make_shared<FiniteGroup>(std::move(labels), std::move(mult)), t};
}

/// S3 as permutations of {0,1,2}; elements e, (01), (02), (12), (012), (021).
inline Symmetry symmetric_group3() {
  using Perm = std::array<int, 3>;
  const std::vector<Perm> perms = {{0, 1, 2}, {1, 0, 2}, {2, 1, 0}, {0, 2, 1}, {1, 2, 0}, {2, 0, 1}};
  const std::vector<std::string> labels = {"e", "(01)", "(02)", "(12)", "(012)", "(021)"};
  auto index = [&](const Perm& p) {
    for (std::size_t k = 0; k < perms.size(); ++k)
      if (perms[k] == p) return k;
    throw Error(ErrorKind::invalid_input, "bad permutation");
  };
  std::vector<std::vector<ElementIndex>> mult(6, std::vector<ElementIndex>(6));
  for (std::size_t a = 0; a < 6; ++a)
    for (std::size_t b = 0; b < 6; ++b) {
      Perm c{};
      for (int i = 0; i < 3; ++i) c[i] = perms[a][perms[b][i]];  // a after b
      mult[a][b] = index(c);
    }
  auto t = std::make_shared<CharacterTable>();
  t->irreps.push_back({"trivial", 1, std::vector<cplx>(6, cplx(1.0))});
  t->irreps.push_back({"sign", 1, {1.0, -1.0, -1.0, -1.0, 1.0, 1.0}});
  t->irreps.push_back({"standard", 2, {2.0, 0.0, 0.0, 0.0, -1.0, -1.0}});
  return {std::make_shared<FiniteGroup>(labels, std::move(mult)), t};
}

/// Names accepted wherever a built-in group can be requested: "trivial",
/// "Z<n>" and "S3".
inline Symmetry builtin_group(const std::string& name) {
  if (name == "trivial" || name == "Z1") return trivial_group();
  if (name == "S3") return symmetric_group3();
  if (name.size() > 1 && name[0] == 'Z' &&
      name.find_first_not_of("0123456789", 1) == std::string::npos && name.size() < 8)
    return cyclic_group(std::stoul(name.substr(1)));
  throw Error(ErrorKind::invalid_input, "unknown built-in group '" + name + "'");
}

/// Left regular representation: rho(g) e_h = e_{gh}.
inline GroupRepresentation regular_representation(const std::shared_ptr<const FiniteGroup>& g) {
  GroupRepresentation rep{g, {}};
  const auto n = static_cast<Eigen::Index>(g->order());
  for (ElementIndex a = 0; a < g->order(); ++a) {
    CMatrix m = CMatrix::Zero(n, n);
    for (ElementIndex h = 0; h < g->order(); ++h) m(static_cast<Eigen::Index>(g->mul(a, h)), static_cast<Eigen::Index>(h)) = 1.0;
    rep.matrices.push_back(m);
  }
  return rep;
}

inline GroupRepresentation trivial_representation(const std::shared_ptr<const FiniteGroup>& g, Eigen::Index dim) {
  return GroupRepresentation{g, std::vector<CMatrix>(g->order(), identity(dim))};
}

}  // namespace tforge

#endif  // TORSION_FORGE_GROUPS_HPP
