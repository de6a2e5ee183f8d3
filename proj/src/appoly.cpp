#include "vbpw/appoly.hpp"

#include <algorithm>
#include <cmath>

#include "vbpw/errors.hpp"

namespace vbpw {

namespace {

// Neumaier summation on one real component.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + carry; }
};

}  // namespace

APPoly APPoly::constant(cplx c) { return monomial(c, 0.0); }

APPoly APPoly::monomial(cplx c, double freq) {
  return from_terms({Term{freq, c}});
}

APPoly APPoly::from_terms(std::vector<Term> terms) {
  APPoly out;
  if (terms.empty()) return out;

  double scale = 0.0;
  double max_freq = 0.0;
  for (const auto& t : terms) {
    scale = std::max(scale, std::abs(t.coef));
    max_freq = std::max(max_freq, std::abs(t.freq));
  }
  if (scale == 0.0) return out;

  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.freq < b.freq; });

  const double merge_tol = kFrequencyTolerance * (1.0 + max_freq);
  const double prune_tol = kPruneTolerance * scale;

  std::vector<Term> merged;
  merged.reserve(terms.size());
  std::size_t i = 0;
  while (i < terms.size()) {
    // a cluster is anchored at its first frequency; members stay within
    // merge_tol of the anchor, the representative is the heaviest member
    const double anchor = terms[i].freq;
    CompensatedSum re, im;
    double rep_freq = anchor;
    double rep_weight = -1.0;
    while (i < terms.size() && terms[i].freq - anchor <= merge_tol) {
      re.add(terms[i].coef.real());
      im.add(terms[i].coef.imag());
      if (std::abs(terms[i].coef) > rep_weight) {
        rep_weight = std::abs(terms[i].coef);
        rep_freq = terms[i].freq;
      }
      ++i;
    }
    const cplx c(re.value(), im.value());
    if (std::abs(c) > prune_tol) merged.push_back(Term{rep_freq, c});
  }
  out.terms_ = std::move(merged);
  return out;
}

cplx APPoly::operator()(double u) const {
  CompensatedSum re, im;
  for (const auto& t : terms_) {
    const cplx v = t.coef * std::polar(1.0, t.freq * u);
    re.add(v.real());
    im.add(v.imag());
  }
  return {re.value(), im.value()};
}

cplx APPoly::coefficient(double freq) const {
  const double tol = kFrequencyTolerance * (1.0 + std::max(std::abs(freq), max_abs_frequency()));
  for (const auto& t : terms_) {
    if (std::abs(t.freq - freq) <= tol) return t.coef;
  }
  return {0.0, 0.0};
}

double APPoly::max_abs_frequency() const {
  double m = 0.0;
  for (const auto& t : terms_) m = std::max(m, std::abs(t.freq));
  return m;
}

double APPoly::max_abs_coefficient() const {
  double m = 0.0;
  for (const auto& t : terms_) m = std::max(m, std::abs(t.coef));
  return m;
}

APPoly APPoly::conj() const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.push_back(Term{-t.freq, std::conj(t.coef)});
  return from_terms(std::move(out));
}

APPoly APPoly::modulus_squared() const { return *this * conj(); }

bool APPoly::is_hermitian(double tol) const {
  const double scale = std::max(max_abs_coefficient(), 1e-300);
  for (const auto& t : terms_) {
    const cplx mirror = coefficient(-t.freq);
    if (std::abs(mirror - std::conj(t.coef)) > tol * scale) return false;
  }
  return true;
}

CosineView APPoly::cosine_view(double tol) const {
  if (!is_hermitian(tol)) {
    throw NumericalError("cosine view requested for a non-Hermitian polynomial");
  }
  const double freq_tol = kFrequencyTolerance * (1.0 + max_abs_frequency());
  const double scale = max_abs_coefficient();
  CosineView view;
  for (const auto& t : terms_) {
    if (std::abs(t.freq) <= freq_tol) {
      view.constant += t.coef.real();
    } else if (t.freq > 0.0) {
      // c e^{ibu} + conj(c) e^{-ibu} = 2 Re(c) cos(bu) - 2 Im(c) sin(bu)
      if (std::abs(t.coef.imag()) > tol * scale) {
        throw NumericalError("cosine view: polynomial has sine components");
      }
      view.terms.emplace_back(2.0 * t.coef.real(), t.freq);
    }
  }
  return view;
}

nlohmann::json APPoly::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& t : terms_) {
    arr.push_back({{"freq", t.freq}, {"re", t.coef.real()}, {"im", t.coef.imag()}});
  }
  return arr;
}

APPoly operator+(const APPoly& f, const APPoly& g) {
  std::vector<APPoly::Term> all(f.terms_.begin(), f.terms_.end());
  all.insert(all.end(), g.terms_.begin(), g.terms_.end());
  return APPoly::from_terms(std::move(all));
}

APPoly operator-(const APPoly& f, const APPoly& g) { return f + (-g); }

APPoly operator*(const APPoly& f, const APPoly& g) {
  std::vector<APPoly::Term> all;
  all.reserve(f.terms_.size() * g.terms_.size());
  for (const auto& a : f.terms_) {
    for (const auto& b : g.terms_) {
      all.push_back(APPoly::Term{a.freq + b.freq, a.coef * b.coef});
    }
  }
  return APPoly::from_terms(std::move(all));
}

APPoly operator*(cplx s, const APPoly& f) {
  std::vector<APPoly::Term> all;
  all.reserve(f.terms_.size());
  for (const auto& a : f.terms_) all.push_back(APPoly::Term{a.freq, s * a.coef});
  return APPoly::from_terms(std::move(all));
}

}  // namespace vbpw
