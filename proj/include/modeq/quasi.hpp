#ifndef MODEQ_QUASI_HPP
#define MODEQ_QUASI_HPP

#include <optional>
#include <utility>
#include <vector>

#include "modeq/errors.hpp"
#include "modeq/groups.hpp"
#include "modeq/linalg.hpp"
#include "modeq/qseries.hpp"

namespace modeq {

// Exact coordinates of `target` in the span of `cols`, checking consistency
// on every coefficient below the common truncation; nullopt if inconsistent.
inline std::optional<Vec> solve_in_span(const std::vector<QSeries>& cols, const QSeries& target) {
  Rat bound = target.trunc();
  long grid = target.grid_den();
  for (const auto& c : cols) {
    if (c.trunc() < bound) bound = c.trunc();
    grid = lcm_long(grid, c.grid_den());
  }
  std::vector<long> rows_idx;
  {
    std::map<long, bool> support;
    auto collect = [&](const QSeries& s) {
      long scale = grid / s.grid_den();
      for (const auto& [n, c] : s.raw_coeffs())
        if (Rat(n, s.grid_den()) < bound) support[n * scale] = true;
    };
    collect(target);
    for (const auto& c : cols) collect(c);
    for (const auto& [n, _] : support) rows_idx.push_back(n);
  }
  Mat a(rows_idx.size(), Vec(cols.size(), Rat(0)));
  Vec b(rows_idx.size(), Rat(0));
  auto fill = [&](const QSeries& s, auto&& put) {
    long scale = grid / s.grid_den();
    std::map<long, Rat> m;
    for (const auto& [n, c] : s.raw_coeffs()) m[n * scale] = c;
    for (size_t i = 0; i < rows_idx.size(); ++i) {
      auto it = m.find(rows_idx[i]);
      if (it != m.end()) put(i, it->second);
    }
  };
  for (size_t j = 0; j < cols.size(); ++j)
    fill(cols[j], [&](size_t i, const Rat& v) { a[i][j] = v; });
  fill(target, [&](size_t i, const Rat& v) { b[i] = v; });
  return solve_exact(a, b);
}

// f = f1 * phi + f0 with f1 in M_{k-2}(Gamma, chi) and f0 in M_k(Gamma, chi).
struct Depth1Form {
  GroupId group;
  int weight;
  CharacterLabel character;
  QSeries f, f1, f0;
  Vec coords1, coords0;
};

inline Depth1Form depth1_decompose(const QSeries& f, GroupId g, int k, CharacterLabel ch,
                                   const Rat& order) {
  SpaceSpec top{g, k, ch, 0}, low{g, k - 2, ch, 0};
  long need = dims(top) + dims(low) + kMembershipMargin;
  Rat avail = f.trunc() < order ? f.trunc() : order;
  if (avail < Rat(need))
    throw InsufficientPrecision("depth-1 decomposition needs order >= joint dims + margin");
  QSeries phi = phi_series(g, avail);
  std::vector<QSeries> cols;
  std::vector<QSeries> b1 = basis(low, avail);
  std::vector<QSeries> b0 = basis(top, avail);
  for (const auto& b : b1) cols.push_back(phi * b);
  for (const auto& b : b0) cols.push_back(b);
  auto sol = solve_in_span(cols, f.truncated(avail));
  if (!sol) throw NotQuasimodular("no depth-1 decomposition in the requested space");
  QSeries f1 = QSeries::zero(avail), f0 = QSeries::zero(avail);
  Vec c1, c0;
  for (size_t i = 0; i < b1.size(); ++i) {
    c1.push_back((*sol)[i]);
    f1 = f1 + b1[i].scaled((*sol)[i]);
  }
  for (size_t i = 0; i < b0.size(); ++i) {
    c0.push_back((*sol)[b1.size() + i]);
    f0 = f0 + b0[i].scaled((*sol)[b1.size() + i]);
  }
  return Depth1Form{g, k, ch, f.truncated(avail), std::move(f1), std::move(f0), std::move(c1),
                    std::move(c0)};
}

// Generic depth-r decomposition f = sum_j phi^j f_j, f_j in M_{k-2j}(chi).
inline std::optional<std::vector<QSeries>> depth_components(const QSeries& f, GroupId g, int k,
                                                            CharacterLabel ch, int depth,
                                                            const Rat& order) {
  Rat avail = f.trunc() < order ? f.trunc() : order;
  QSeries phi = phi_series(g, avail);
  std::vector<QSeries> cols;
  std::vector<size_t> block_sizes;
  for (int j = 0; j <= depth; ++j) {
    SpaceSpec s{g, k - 2 * j, ch, 0};
    auto bs = basis(s, avail);
    block_sizes.push_back(bs.size());
    QSeries phi_j = pow_int(phi, j);
    for (const auto& b : bs) cols.push_back(phi_j * b);
  }
  auto sol = solve_in_span(cols, f.truncated(avail));
  if (!sol) return std::nullopt;
  std::vector<QSeries> comps;
  size_t at = 0;
  for (int j = 0; j <= depth; ++j) {
    QSeries fj = QSeries::zero(avail);
    SpaceSpec s{g, k - 2 * j, ch, 0};
    auto bs = basis(s, avail);
    for (size_t i = 0; i < bs.size(); ++i) fj = fj + bs[i].scaled((*sol)[at + i]);
    at += block_sizes[static_cast<size_t>(j)];
    comps.push_back(std::move(fj));
  }
  return comps;
}

// The q-normalized Wronskian attached to a depth-1 form:
//   W = -f^2 + A (f1 D_q f - (D_q f1) f).
// Works over any coefficient ring; the parametric tests instantiate it with
// polynomial coefficients.
template <class R>
SeriesT<R> wronskian_series(const SeriesT<R>& f, const SeriesT<R>& f1, int anomaly) {
  SeriesT<R> w = -(f * f) + (f1 * dq(f) - dq(f1) * f).scaled(R(Rat(anomaly)));
  return w;
}

struct WronskianResult {
  QSeries w;
  int weight;            // 2k
  CharacterLabel character;  // chi^2
  Vec coords;            // membership coordinates in M_{2k}(Gamma, chi^2)
};

inline WronskianResult wronskian(const Depth1Form& d, const Rat& order) {
  const GroupContext& ctx = group_context(d.group);
  QSeries w = wronskian_series(d.f, d.f1, ctx.anomaly);
  CharacterLabel sq{(2 * d.character.m) % 4};
  SpaceSpec s{d.group, 2 * d.weight, sq, 0};
  auto coords = membership(w, s, order);
  if (!coords)
    throw Error("Wronskian failed membership in weight " + std::to_string(2 * d.weight));
  // vanishing-order law
  auto vw = w.valuation();
  auto vf = d.f.valuation();
  auto vf1 = d.f1.valuation();
  if (vf) {
    Rat expect = (!vf1 || *vf <= *vf1) ? (*vf + *vf) : (*vf + *vf1);
    if (!vw || *vw != expect) throw Error("Wronskian vanishing-order law violated");
  }
  return WronskianResult{std::move(w), 2 * d.weight, sq, std::move(*coords)};
}

// Normalized extremal element of a depth-<=1 space: vanishing order at
// infinity equal to dim - 1, leading coefficient 1.
inline QSeries extremal(const SpaceSpec& space, const Rat& order) {
  if (space.depth_bound != 1) throw UnsupportedSpace("extremal elements live in depth-1 spaces");
  long d = dims(space);
  if (d <= 0) throw NoExtremal("the space is zero");
  Rat avail = order;
  if (avail < Rat(d + kMembershipMargin))
    throw InsufficientPrecision("extremal computation needs order >= dims + margin");
  QSeries phi = phi_series(space.group, avail);
  SpaceSpec top{space.group, space.weight, space.character, 0};
  SpaceSpec low{space.group, space.weight - 2, space.character, 0};
  std::vector<QSeries> cols;
  for (const auto& b : basis(low, avail)) cols.push_back(phi * b);
  for (const auto& b : basis(top, avail)) cols.push_back(b);
  if (static_cast<long>(cols.size()) != d) throw Error("quasimodular dimension mismatch");
  // kernel of the "first d-1 coefficients" map
  Mat a(static_cast<size_t>(d - 1), Vec(cols.size(), Rat(0)));
  for (size_t j = 0; j < cols.size(); ++j)
    for (long n = 0; n < d - 1; ++n) a[static_cast<size_t>(n)][j] = cols[j].coeff_at(Rat(n));
  auto kern = nullspace(std::move(a), cols.size());
  if (kern.empty()) throw NoExtremal("no element vanishes to order dim - 1");
  if (kern.size() > 1) throw NonUniqueExtremal("kernel dimension exceeds 1");
  QSeries f = QSeries::zero(avail);
  for (size_t j = 0; j < cols.size(); ++j) f = f + cols[j].scaled(kern[0][j]);
  auto v = f.valuation();
  if (!v || *v != Rat(d - 1)) throw NonUniqueExtremal("extremal vanishing order is not dim - 1");
  return f.scaled(Rat(1) / f.leading_coeff());
}

}  // namespace modeq

#endif
