#include "grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

#include <unordered_map>

#include "lattice.hpp"

namespace sphlab {

namespace {

inline int compare_points(const std::int32_t* a, const std::int32_t* b, int d) {
  for (int i = 0; i < d; ++i) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  return 0;
}

void check_coord_range(std::int64_t c) {
  if (c < -kCoordLimit || c > kCoordLimit)
    fail(errc::cap_exceeded, "grid coordinate " + std::to_string(c) +
                                 " outside the representable range +-2^30");
}

void validate_grid_dimension(int d) {
  if (d < 1) fail(errc::invalid_argument, "grid dimension must be >= 1");
  if (d > 1024) fail(errc::invalid_argument, "grid dimension too large");
}

// Shared by average / maximal_over once per-lambda counts are known.
GridFunction average_with_sphere(const GridFunction& f, const std::vector<std::int32_t>& sphere,
                                 Count r) {
  int d = f.dimension();
  std::size_t nf = f.support_size();
  std::size_t ns = sphere.size() / static_cast<std::size_t>(d);
  double rd = count_to_double(r);

  std::vector<std::int32_t> coords;
  std::vector<double> values;

  if (nf == 1) {
    // translate of the sphere: lexicographic order is preserved by the shift
    coords.resize(ns * static_cast<std::size_t>(d));
    const std::int32_t* x0 = f.point(0);
    for (std::size_t i = 0; i < ns; ++i) {
      for (int k = 0; k < d; ++k) {
        std::int64_t s = static_cast<std::int64_t>(x0[k]) +
                         sphere[i * static_cast<std::size_t>(d) + static_cast<std::size_t>(k)];
        check_coord_range(s);
        coords[i * static_cast<std::size_t>(d) + static_cast<std::size_t>(k)] =
            static_cast<std::int32_t>(s);
      }
    }
    values.assign(ns, f.value(0) / rd);
    return GridFunction::from_canonical(d, std::move(coords), std::move(values));
  }

  std::size_t n = nf * ns;
  coords.resize(n * static_cast<std::size_t>(d));
  values.resize(n);
  std::size_t rec = 0;
  for (std::size_t i = 0; i < ns; ++i) {
    const std::int32_t* y = sphere.data() + i * static_cast<std::size_t>(d);
    for (std::size_t j = 0; j < nf; ++j, ++rec) {
      const std::int32_t* x0 = f.point(j);
      for (int k = 0; k < d; ++k) {
        std::int64_t s = static_cast<std::int64_t>(x0[k]) + y[k];
        check_coord_range(s);
        coords[rec * static_cast<std::size_t>(d) + static_cast<std::size_t>(k)] =
            static_cast<std::int32_t>(s);
      }
      values[rec] = f.value(j);
    }
  }
  GridFunction merged = GridFunction::from_records(d, std::move(coords), std::move(values));
  // from_records summed duplicate contributions; divide by the normalizer once
  std::vector<std::int32_t> oc;
  std::vector<double> ov;
  oc.reserve(merged.coords().size());
  ov.reserve(merged.support_size());
  auto dz = static_cast<std::size_t>(d);
  for (std::size_t i = 0; i < merged.support_size(); ++i) {
    double v = merged.value(i) / rd;
    if (v == 0.0) continue;
    ov.push_back(v);
    const std::int32_t* pt = merged.point(i);
    oc.insert(oc.end(), pt, pt + dz);
  }
  return GridFunction::from_canonical(d, std::move(oc), std::move(ov));
}

void validate_operator_input(const GridFunction& f) {
  if (f.dimension() < 4)
    fail(errc::dimension_too_small, "averaging operators require dimension >= 4");
  if (f.support_size() == 0)
    fail(errc::invalid_argument, "operator input has empty support");
}

// Sorted support plus nonnegative magnitudes; intermediate form of maximal_over.
struct MaxLayer {
  std::vector<std::int32_t> coords;
  std::vector<double> values;
};

MaxLayer merge_max_layers(const MaxLayer& a, const MaxLayer& b, int d) {
  const auto dz = static_cast<std::size_t>(d);
  MaxLayer out;
  out.coords.reserve(a.coords.size() + b.coords.size());
  out.values.reserve(a.values.size() + b.values.size());
  std::size_t i = 0, j = 0;
  const std::size_t na = a.values.size(), nb = b.values.size();
  while (i < na && j < nb) {
    const std::int32_t* pa = a.coords.data() + i * dz;
    const std::int32_t* pb = b.coords.data() + j * dz;
    const int c = compare_points(pa, pb, d);
    if (c < 0) {
      out.coords.insert(out.coords.end(), pa, pa + dz);
      out.values.push_back(a.values[i++]);
    } else if (c > 0) {
      out.coords.insert(out.coords.end(), pb, pb + dz);
      out.values.push_back(b.values[j++]);
    } else {
      out.coords.insert(out.coords.end(), pa, pa + dz);
      out.values.push_back(std::max(a.values[i++], b.values[j++]));
    }
  }
  if (i < na) {
    out.coords.insert(out.coords.end(), a.coords.begin() + std::ptrdiff_t(i * dz), a.coords.end());
    out.values.insert(out.values.end(), a.values.begin() + std::ptrdiff_t(i), a.values.end());
  }
  if (j < nb) {
    out.coords.insert(out.coords.end(), b.coords.begin() + std::ptrdiff_t(j * dz), b.coords.end());
    out.values.insert(out.values.end(), b.values.begin() + std::ptrdiff_t(j), b.values.end());
  }
  return out;
}

}  // namespace

GridFunction GridFunction::delta(int d) {
  validate_grid_dimension(d);
  GridFunction g;
  g.d_ = d;
  g.coords_.assign(static_cast<std::size_t>(d), 0);
  g.values_.assign(1, 1.0);
  return g;
}

GridFunction GridFunction::from_records(int d, std::vector<std::int32_t> coords,
                                        std::vector<double> values) {
  validate_grid_dimension(d);
  auto dz = static_cast<std::size_t>(d);
  if (coords.size() != values.size() * dz)
    fail(errc::invalid_argument, "record arrays disagree in length");
  for (std::int32_t c : coords) check_coord_range(c);
  for (double v : values) {
    if (!std::isfinite(v)) fail(errc::invalid_argument, "grid values must be finite");
  }

  std::size_t n = values.size();
  std::vector<std::uint64_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  const std::int32_t* cp = coords.data();
  const double* vp = values.data();
  std::sort(idx.begin(), idx.end(), [&](std::uint64_t a, std::uint64_t b) {
    int c = compare_points(cp + a * dz, cp + b * dz, d);
    if (c != 0) return c < 0;
    return vp[a] < vp[b];
  });

  GridFunction g;
  g.d_ = d;
  g.coords_.reserve(coords.size());
  g.values_.reserve(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    const std::int32_t* pt = cp + idx[i] * dz;
    double sum = 0.0;  // duplicates merge in ascending-value order (sorted above)
    while (j < n && compare_points(cp + idx[j] * dz, pt, d) == 0) {
      sum += vp[idx[j]];
      ++j;
    }
    if (sum != 0.0) {
      g.coords_.insert(g.coords_.end(), pt, pt + dz);
      g.values_.push_back(sum);
    }
    i = j;
  }
  return g;
}

GridFunction GridFunction::from_canonical(int d, std::vector<std::int32_t> coords,
                                          std::vector<double> values) {
  validate_grid_dimension(d);
  auto dz = static_cast<std::size_t>(d);
  if (coords.size() != values.size() * dz)
    fail(errc::invalid_argument, "record arrays disagree in length");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || values[i] == 0.0)
      fail(errc::internal, "canonical records must carry nonzero finite values");
    if (i > 0 && compare_points(coords.data() + (i - 1) * dz, coords.data() + i * dz, d) >= 0)
      fail(errc::internal, "canonical records must be strictly lex-ordered");
  }
  GridFunction g;
  g.d_ = d;
  g.coords_ = std::move(coords);
  g.values_ = std::move(values);
  return g;
}

double GridFunction::value_at(const std::int64_t* pt) const {
  auto dz = static_cast<std::size_t>(d_);
  std::vector<std::int32_t> key(dz);
  for (std::size_t i = 0; i < dz; ++i) {
    if (pt[i] < -kCoordLimit || pt[i] > kCoordLimit) return 0.0;
    key[i] = static_cast<std::int32_t>(pt[i]);
  }
  std::size_t lo = 0;
  std::size_t hi = values_.size();
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (compare_points(point(mid), key.data(), d_) < 0)
      lo = mid + 1;
    else
      hi = mid;
  }
  if (lo < values_.size() && compare_points(point(lo), key.data(), d_) == 0) return values_[lo];
  return 0.0;
}

std::pair<std::vector<std::int32_t>, std::vector<std::int32_t>> GridFunction::bounding_box()
    const {
  if (values_.empty()) fail(errc::invalid_argument, "bounding box of empty support");
  auto dz = static_cast<std::size_t>(d_);
  std::vector<std::int32_t> lo(point(0), point(0) + dz);
  std::vector<std::int32_t> hi = lo;
  for (std::size_t i = 1; i < values_.size(); ++i) {
    const std::int32_t* p = point(i);
    for (std::size_t k = 0; k < dz; ++k) {
      lo[k] = std::min(lo[k], p[k]);
      hi[k] = std::max(hi[k], p[k]);
    }
  }
  return {lo, hi};
}

GridFunction average(const GridFunction& f, std::int64_t lambda, const Caps& caps) {
  validate_caps(caps);
  validate_operator_input(f);
  if (lambda < 0) fail(errc::invalid_argument, "radius-squared must be >= 0");

  SphereSpec spec{f.dimension(), lambda};
  Count r = count_reps(spec, caps);
  Count predicted = checked_mul_u64(r, f.support_size());
  if (predicted > static_cast<Count>(caps.max_sphere_points))
    fail(errc::cap_exceeded, "predicted output support " + count_to_string(predicted) +
                                 " exceeds cap " + std::to_string(caps.max_sphere_points));
  std::vector<std::int32_t> sphere = enumerate_sphere(spec, caps);
  return average_with_sphere(f, sphere, r);
}

GridFunction maximal_over(const GridFunction& f, const std::vector<std::int64_t>& lambdas,
                          const Caps& caps) {
  validate_caps(caps);
  validate_operator_input(f);
  if (lambdas.empty()) fail(errc::empty_sequence, "maximal operator needs at least one radius");
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (lambdas[i] < 0) fail(errc::invalid_argument, "radius-squared must be >= 0");
    if (i > 0 && lambdas[i] <= lambdas[i - 1])
      fail(errc::invalid_argument, "radii must be strictly increasing");
  }

  int d = f.dimension();
  RepCountTable table = count_reps_upto(d, lambdas.back(), caps);
  Count predicted = 0;
  for (std::int64_t lam : lambdas)
    predicted = checked_add(predicted, checked_mul_u64(table.at(lam), f.support_size()));
  if (predicted > static_cast<Count>(caps.max_sphere_points))
    fail(errc::cap_exceeded, "cumulative predicted support " + count_to_string(predicted) +
                                 " exceeds cap " + std::to_string(caps.max_sphere_points));

  // One sorted layer of |A_lambda f| per radius, merged pairwise. The
  // pointwise max is exact and commutative, so the merge tree shape cannot
  // change the result.
  const auto dz = static_cast<std::size_t>(d);
  std::vector<MaxLayer> layers;
  layers.reserve(lambdas.size());
  for (std::int64_t lam : lambdas) {
    SphereSpec spec{d, lam};
    const Count rd = table.at(lam);
    MaxLayer lay;
    if (f.support_size() == 1) {
      // single translate of the sphere: the walk order survives the shift
      const std::int32_t* x0 = f.point(0);
      const double w = std::abs(f.value(0)) / count_to_double(rd);
      const auto n = static_cast<std::size_t>(rd);
      lay.coords.reserve(n * dz);
      walk_sphere(spec, [&](const std::int32_t* y) {
        for (int k = 0; k < d; ++k) {
          const std::int64_t c = std::int64_t(y[k]) + std::int64_t(x0[k]);
          check_coord_range(c);
          lay.coords.push_back(static_cast<std::int32_t>(c));
        }
      });
      lay.values.assign(n, w);
    } else {
      std::vector<std::int32_t> sphere = enumerate_sphere(spec, caps);
      GridFunction avg = average_with_sphere(f, sphere, rd);
      lay.coords = std::move(avg.coords_);
      lay.values = std::move(avg.values_);
      for (double& v : lay.values) v = std::abs(v);
    }
    layers.push_back(std::move(lay));
  }

  while (layers.size() > 1) {
    std::vector<MaxLayer> next;
    next.reserve((layers.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < layers.size(); i += 2)
      next.push_back(merge_max_layers(layers[i], layers[i + 1], d));
    if (layers.size() % 2) next.push_back(std::move(layers.back()));
    layers = std::move(next);
  }

  GridFunction out;
  out.d_ = d;
  out.coords_ = std::move(layers.front().coords);
  out.values_ = std::move(layers.front().values);
  return out;
}

NormReport lp_norm(const GridFunction& f, double p) {
  if (std::isnan(p) || p < 1.0) fail(errc::invalid_exponent, "lp_norm requires p >= 1");
  NormReport rep;
  rep.p = p;
  rep.summation_terms = f.support_size();
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::abs(v));
    rep.value = m;
    return rep;
  }
  NeumaierSum acc;
  if (p == 1.0) {
    for (double v : f.values()) acc.add(std::abs(v));
    rep.value = acc.value();
  } else if (p == 2.0) {
    for (double v : f.values()) acc.add(v * v);
    rep.value = std::sqrt(acc.value());
  } else {
    // merged maximal layers carry few distinct magnitudes; memoize pow
    std::unordered_map<double, double> memo;
    for (double v : f.values()) {
      double a = std::abs(v);
      double term;
      if (memo.size() < 4096) {
        auto it = memo.find(a);
        if (it == memo.end()) it = memo.emplace(a, std::pow(a, p)).first;
        term = it->second;
      } else {
        auto it = memo.find(a);
        term = (it != memo.end()) ? it->second : std::pow(a, p);
      }
      acc.add(term);
    }
    rep.value = std::pow(acc.value(), 1.0 / p);
  }
  return rep;
}

GridFunction translate(const GridFunction& f, const std::vector<std::int64_t>& shift) {
  if (static_cast<int>(shift.size()) != f.dimension())
    fail(errc::invalid_argument, "shift vector length must equal the dimension");
  GridFunction out;
  out.d_ = f.d_;
  out.values_ = f.values_;
  out.coords_.resize(f.coords_.size());
  auto dz = static_cast<std::size_t>(f.d_);
  for (std::size_t i = 0; i < f.values_.size(); ++i) {
    for (std::size_t k = 0; k < dz; ++k) {
      std::int64_t s = static_cast<std::int64_t>(f.coords_[i * dz + k]) +
                       shift[k];
      check_coord_range(s);
      out.coords_[i * dz + k] = static_cast<std::int32_t>(s);
    }
  }
  return out;
}

GridFunction signed_permute(const GridFunction& f, const std::vector<int>& perm,
                            const std::vector<int>& signs) {
  int d = f.dimension();
  auto dz = static_cast<std::size_t>(d);
  if (static_cast<int>(perm.size()) != d || static_cast<int>(signs.size()) != d)
    fail(errc::invalid_argument, "permutation arrays must have length d");
  std::vector<bool> seen(dz, false);
  for (int i = 0; i < d; ++i) {
    if (perm[static_cast<std::size_t>(i)] < 0 || perm[static_cast<std::size_t>(i)] >= d ||
        seen[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])])
      fail(errc::invalid_argument, "invalid coordinate permutation");
    seen[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = true;
    int s = signs[static_cast<std::size_t>(i)];
    if (s != 1 && s != -1) fail(errc::invalid_argument, "signs must be +1 or -1");
  }
  std::vector<std::int32_t> coords(f.coords_.size());
  for (std::size_t i = 0; i < f.values_.size(); ++i) {
    for (std::size_t k = 0; k < dz; ++k) {
      std::int32_t src = f.coords_[i * dz + static_cast<std::size_t>(
                                                perm[k])];
      coords[i * dz + k] = static_cast<std::int32_t>(signs[k] * static_cast<std::int64_t>(src));
    }
  }
  // pure relabeling: re-sorting restores canonical order without touching values
  return GridFunction::from_records(d, std::move(coords), f.values_);
}

}  // namespace sphlab
