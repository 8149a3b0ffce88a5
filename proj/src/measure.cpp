#include "convpow/measure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "convpow/errors.hpp"
#include "detail.hpp"

namespace convpow {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

bool positive_finite(double x) { return std::isfinite(x) && x > 0; }

void require(bool ok, const std::string& family, const char* what) {
  if (!ok) throw InvalidSpec(family + ": " + what);
}

void validate(const MeasureVariant& v) {
  std::visit(
      overloaded{
          [](const PowerLaw& m) {
            require(positive_finite(m.b) && positive_finite(m.alpha), "power_law", "b and alpha must be positive");
          },
          [](const Affine& m) {
            require(positive_finite(m.a) && positive_finite(m.b), "affine", "a and b must be positive");
          },
          [](const LogPower& m) { require(positive_finite(m.alpha), "log_power", "alpha must be positive"); },
          [](const SqrtExpDensity&) {},
          [](const ShiftedExp& m) { require(positive_finite(m.a), "shifted_exp", "a must be positive"); },
          [](const Exp& m) { require(positive_finite(m.a), "exp", "a must be positive"); },
          [](const HeavyExpDensity& m) {
            require(positive_finite(m.alpha), "heavy_exp_density", "alpha must be positive");
          },
          [](const Lattice& m) {
            require(positive_finite(m.span), "lattice", "span must be positive");
            require(std::isfinite(m.offset) && m.offset >= 0, "lattice", "offset must be nonnegative");
            require(!m.masses.empty(), "lattice", "masses must be nonempty");
            for (double x : m.masses) require(std::isfinite(x) && x >= 0, "lattice", "masses must be nonnegative");
            require(std::any_of(m.masses.begin(), m.masses.end(), [](double x) { return x > 0; }), "lattice",
                    "at least one mass must be positive");
            if (m.tail == Tail::Repeat) require(m.masses.back() > 0, "lattice", "repeated tail mass must be positive");
          },
          [](const Density& m) {
            require(static_cast<bool>(m.f), "density", "density callable is empty");
            require(std::isfinite(m.atom_at_zero) && m.atom_at_zero >= 0, "density", "atom must be nonnegative");
            require(std::isfinite(m.abscissa) && m.abscissa >= 0, "density", "abscissa must be nonnegative");
            require(std::isfinite(m.support_start) && m.support_start >= 0, "density",
                    "support_start must be nonnegative");
            require(m.support_end > m.support_start, "density", "support_end must exceed support_start");
          },
          [](const Tabulated& m) {
            require(positive_finite(m.h), "tabulated", "h must be positive");
            require(!m.values.empty(), "tabulated", "V must be nonempty");
            require(std::isfinite(m.values[0]) && m.values[0] >= 0, "tabulated", "V(0) must be nonnegative");
            for (std::size_t k = 1; k < m.values.size(); ++k)
              require(std::isfinite(m.values[k]) && m.values[k] >= m.values[k - 1], "tabulated",
                      "V must be nondecreasing");
            require(m.values.back() > 0, "tabulated", "V must not vanish identically");
            if (m.tail == Tail::Repeat) {
              const double last = m.values.size() > 1 ? m.values.back() - m.values[m.values.size() - 2] : m.values[0];
              require(last > 0, "tabulated", "repeated tail increment must be positive");
            }
          },
      },
      v);
}

/// Index of the grid cell ((k-1)h, kh] containing x.
std::int64_t cell_of(double x, double h) {
  if (x <= 0) return 0;
  return static_cast<std::int64_t>(std::ceil(x / h - 1e-9));
}

}  // namespace

MeasureSpec::MeasureSpec(MeasureVariant v) : v_(std::move(v)) { validate(v_); }

std::string MeasureSpec::family() const {
  return std::visit(overloaded{
                        [](const PowerLaw&) { return "power_law"; },
                        [](const Affine&) { return "affine"; },
                        [](const LogPower&) { return "log_power"; },
                        [](const SqrtExpDensity&) { return "sqrt_exp_density"; },
                        [](const ShiftedExp&) { return "shifted_exp"; },
                        [](const Exp&) { return "exp"; },
                        [](const HeavyExpDensity&) { return "heavy_exp_density"; },
                        [](const Lattice&) { return "lattice"; },
                        [](const Density&) { return "density"; },
                        [](const Tabulated&) { return "tabulated"; },
                    },
                    v_);
}

bool MeasureSpec::is_arithmetic() const {
  return std::holds_alternative<Lattice>(v_) || std::holds_alternative<Tabulated>(v_);
}

namespace detail {

double log_pow_diff(double x, double y, double p) {
  if (y <= 0) return p * std::log(x);
  return p * std::log(x) + std::log(-std::expm1(p * std::log(y / x)));
}

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  if (!(b > a)) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const bool singular = !std::isfinite(fa) || !std::isfinite(fb);
  if (singular) {
    boost::math::quadrature::tanh_sinh<double> ts(12);
    return ts.integrate(f, a, b, rel_tol);
  }
  double err = 0;
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 20, rel_tol, &err);
}

double log_integral(const std::function<double(double)>& log_f, double a, double b, double rel_tol) {
  if (!(b > a)) return -kInf;
  double m = -kInf;
  for (int i = 0; i <= 16; ++i) {
    const double v = log_f(a + (b - a) * i / 16.0);
    if (std::isfinite(v)) m = std::max(m, v);
  }
  if (m == -kInf) {
    const double va = log_f(a);
    const double vb = log_f(b);
    if (va == kInf || vb == kInf || std::isnan(va) || std::isnan(vb)) m = 0.0;
    else return -kInf;
  }
  const double value = integrate([&](double x) { return std::exp(log_f(x) - m); }, a, b, rel_tol);
  if (!(value > 0)) return std::isfinite(value) ? -kInf : kInf;
  return m + std::log(value);
}

std::optional<DensityModel> density_model(const MeasureSpec& spec) {
  return std::visit(
      overloaded{
          [](const LogPower& m) -> std::optional<DensityModel> {
            const double alpha = m.alpha;
            DensityModel d;
            d.log_density = [alpha](double x) {
              if (x <= 0) return alpha < 1 ? kInf : (alpha == 1 ? 0.0 : -kInf);
              const double l = std::log1p(x);
              return std::log(alpha) + (alpha - 1) * std::log(l) - l;
            };
            return d;
          },
          [](const SqrtExpDensity&) -> std::optional<DensityModel> {
            DensityModel d;
            d.log_density = [](double x) {
              if (x <= 0) return kInf;
              return -std::log(2.0) - 0.5 * std::log(x) + std::sqrt(x);
            };
            return d;
          },
          [](const HeavyExpDensity& m) -> std::optional<DensityModel> {
            const double alpha = m.alpha;
            DensityModel d;
            d.log_density = [alpha](double x) { return x < 0 ? -kInf : x - (2 + alpha) * std::log1p(x); };
            return d;
          },
          [](const Density& m) -> std::optional<DensityModel> {
            DensityModel d;
            auto f = m.f;
            const double lo = m.support_start;
            const double hi = m.support_end;
            d.log_density = [f, lo, hi](double x) {
              if (x < lo || x > hi) return -kInf;
              const double v = f(x);
              if (std::isnan(v) || v < 0) throw InvalidSpec("density: f must be nonnegative");
              return v == 0 ? -kInf : std::log(v);
            };
            d.atom_at_zero = m.atom_at_zero;
            d.support_start = m.support_start;
            d.support_end = m.support_end;
            return d;
          },
          [](const auto&) -> std::optional<DensityModel> { return std::nullopt; },
      },
      spec.variant());
}

std::optional<AtomicModel> atomic_model(const MeasureSpec& spec) {
  if (const auto* l = spec.as<Lattice>()) {
    AtomicModel a;
    a.span = l->span;
    a.repeat = l->tail == Tail::Repeat;
    for (std::size_t k = 0; k < l->masses.size(); ++k) {
      a.positions.push_back(l->offset + static_cast<double>(k) * l->span);
      a.masses.push_back(l->masses[k]);
    }
    return a;
  }
  if (const auto* t = spec.as<Tabulated>()) {
    AtomicModel a;
    a.span = t->h;
    a.repeat = t->tail == Tail::Repeat;
    for (std::size_t k = 0; k < t->values.size(); ++k) {
      a.positions.push_back(static_cast<double>(k) * t->h);
      a.masses.push_back(k == 0 ? t->values[0] : t->values[k] - t->values[k - 1]);
    }
    if (a.repeat && t->values.size() == 1) a.masses.back() = t->values[0];
    return a;
  }
  return std::nullopt;
}

}  // namespace detail

namespace {

double eval_atomic(const detail::AtomicModel& a, double x) {
  const double tol = 1e-12 * std::max(1.0, std::fabs(x));
  double v = 0;
  for (std::size_t k = 0; k < a.positions.size(); ++k)
    if (a.positions[k] <= x + tol) v += a.masses[k];
  if (a.repeat) {
    const double last = a.positions.back();
    if (x + tol >= last + a.span) {
      const double extra = std::floor((x - last) / a.span + 1e-12);
      v += extra * a.masses.back();
    }
  }
  return v;
}

}  // namespace

double eval_V(const MeasureSpec& spec, double x) {
  if (x < 0) return 0.0;
  return std::visit(
      overloaded{
          [x](const PowerLaw& m) { return m.b * std::pow(x, m.alpha); },
          [x](const Affine& m) { return m.a * x + m.b; },
          [x](const LogPower& m) { return std::pow(std::log1p(x), m.alpha); },
          [x](const SqrtExpDensity&) { return std::expm1(std::sqrt(x)); },
          [x](const ShiftedExp& m) { return std::expm1(m.a * x); },
          [x](const Exp& m) { return std::exp(m.a * x); },
          [x, &spec](const HeavyExpDensity&) {
            const auto d = detail::density_model(spec);
            return std::exp(detail::log_integral(d->log_density, 0.0, x));
          },
          [x, &spec](const Density& m) {
            const auto d = detail::density_model(spec);
            const double hi = std::min(x, m.support_end);
            return m.atom_at_zero + std::exp(detail::log_integral(d->log_density, m.support_start, hi));
          },
          [x, &spec](const auto&) { return eval_atomic(*detail::atomic_model(spec), x); },
      },
      spec.variant());
}

double support_start(const MeasureSpec& spec) {
  if (auto a = detail::atomic_model(spec)) {
    for (std::size_t k = 0; k < a->positions.size(); ++k)
      if (a->masses[k] > 0) return a->positions[k];
  }
  if (const auto* d = spec.as<Density>()) return d->atom_at_zero > 0 ? 0.0 : d->support_start;
  return 0.0;
}

GridMeasure::GridMeasure(double h, std::vector<GridAtom> atoms, double tilt)
    : h_(h), atoms_(std::move(atoms)), tilt_(tilt) {
  if (!(h > 0) || !std::isfinite(h)) throw InvalidArgument("GridMeasure: step must be positive");
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (atoms_[i].index < 0) throw InvalidArgument("GridMeasure: negative index");
    if (i > 0 && atoms_[i].index <= atoms_[i - 1].index)
      throw InvalidArgument("GridMeasure: indices must be strictly increasing");
    if (atoms_[i].mass.sign() < 0) throw InvalidArgument("GridMeasure: masses must be nonnegative");
  }
}

LogNumber GridMeasure::mass_at(std::int64_t k) const {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), k,
                             [](const GridAtom& a, std::int64_t idx) { return a.index < idx; });
  if (it == atoms_.end() || it->index != k) return LogNumber::zero();
  return it->mass;
}

LogNumber GridMeasure::total_mass() const {
  LogNumber s;
  for (const auto& a : atoms_) s += a.mass;
  return s;
}

GridMeasure GridMeasure::tilted(double kappa) const {
  std::vector<GridAtom> out = atoms_;
  const double dk = kappa - tilt_;
  for (auto& a : out) a.mass = a.mass.scaled_by_exp(-dk * static_cast<double>(a.index) * h_);
  return GridMeasure(h_, std::move(out), kappa);
}

GridMeasure discretize(const MeasureSpec& spec, double h, double x_max) {
  if (!(h > 0) || !std::isfinite(h)) throw InvalidArgument("discretize: h must be positive");
  if (!(x_max >= h) || !std::isfinite(x_max)) throw InvalidArgument("discretize: x_max must be >= h");
  const auto K = static_cast<std::int64_t>(std::floor(x_max / h + 1e-9));
  std::vector<double> logm(static_cast<std::size_t>(K + 1), -detail::kInf);

  auto set_cells = [&](auto&& log_cell) {
    for (std::int64_t k = 1; k <= K; ++k) logm[k] = log_cell(static_cast<double>(k - 1) * h, static_cast<double>(k) * h);
  };

  if (auto atomic = detail::atomic_model(spec)) {
    std::vector<double> lin(logm.size(), 0.0);
    const double end = static_cast<double>(K) * h;
    auto place = [&](double x, double m) {
      const auto k = cell_of(x, h);
      if (k <= K && m > 0) lin[k] += m;
    };
    for (std::size_t i = 0; i < atomic->positions.size(); ++i) place(atomic->positions[i], atomic->masses[i]);
    if (atomic->repeat) {
      for (std::int64_t n = 1;; ++n) {
        const double x = atomic->positions.back() + static_cast<double>(n) * atomic->span;
        if (cell_of(x, h) > K || x > end + h) break;
        place(x, atomic->masses.back());
      }
    }
    for (std::size_t k = 0; k < lin.size(); ++k) logm[k] = lin[k] > 0 ? std::log(lin[k]) : -detail::kInf;
  } else {
    std::visit(overloaded{
                   [&](const PowerLaw& m) {
                     set_cells([&](double lo, double hi) { return std::log(m.b) + detail::log_pow_diff(hi, lo, m.alpha); });
                   },
                   [&](const Affine& m) {
                     logm[0] = std::log(m.b);
                     set_cells([&](double, double) { return std::log(m.a * h); });
                   },
                   [&](const LogPower& m) {
                     set_cells([&](double lo, double hi) {
                       return detail::log_pow_diff(std::log1p(hi), std::log1p(lo), m.alpha);
                     });
                   },
                   [&](const SqrtExpDensity&) {
                     set_cells([&](double lo, double hi) {
                       const double a = std::sqrt(lo);
                       const double b = std::sqrt(hi);
                       return b + std::log(-std::expm1(a - b));
                     });
                   },
                   [&](const ShiftedExp& m) {
                     set_cells([&](double, double hi) { return m.a * hi + std::log(-std::expm1(-m.a * h)); });
                   },
                   [&](const Exp& m) {
                     logm[0] = 0.0;
                     set_cells([&](double, double hi) { return m.a * hi + std::log(-std::expm1(-m.a * h)); });
                   },
                   [&](const auto&) {
                     const auto d = detail::density_model(spec);
                     if (d->atom_at_zero > 0) logm[0] = std::log(d->atom_at_zero);
                     set_cells([&](double lo, double hi) {
                       const double a = std::max(lo, d->support_start);
                       const double b = std::min(hi, d->support_end);
                       if (!(b > a)) return -detail::kInf;
                       return detail::log_integral(d->log_density, a, b);
                     });
                   },
               },
               spec.variant());
  }

  std::vector<GridAtom> atoms;
  atoms.reserve(logm.size());
  for (std::int64_t k = 0; k <= K; ++k) {
    const double lm = logm[k];
    if (std::isnan(lm) || lm == detail::kInf) {
      std::ostringstream os;
      os << spec.family() << ": mass of grid cell " << k << " is not finite";
      throw InvalidSpec(os.str());
    }
    atoms.push_back({k, LogNumber::from_log(lm)});
  }
  return GridMeasure(h, std::move(atoms));
}

}  // namespace convpow
