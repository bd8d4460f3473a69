#include "isospec/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "isospec/errors.hpp"

namespace isospec {

int SpectrumReport::dimension() const { return std::accumulate(multiplicities.begin(), multiplicities.end(), 0); }

SpectrumReport SpectrumReport::from_values(const Vec& raw, double tol, const std::string& provenance,
                                           double diameter_bound) {
  SpectrumReport rep;
  rep.cluster_tolerance = tol;
  rep.provenance = provenance;
  std::vector<double> v(raw.data(), raw.data() + raw.size());
  std::sort(v.begin(), v.end());
  size_t i = 0;
  while (i < v.size()) {
    size_t j = i + 1;
    // grow the cluster while consecutive gaps stay below the (relative) tol
    while (j < v.size() && std::abs(v[j] - v[j - 1]) <= tol * std::max(1.0, std::abs(v[j]))) ++j;
    const double lo = v[i], hi = v[j - 1];
    double sum = 0;
    for (size_t t = i; t < j; ++t) sum += v[t];
    rep.values.push_back(sum / double(j - i));
    rep.multiplicities.push_back(static_cast<int>(j - i));
    rep.diameters.push_back(hi - lo);
    if (hi - lo >= diameter_bound) rep.ambiguous = true;
    i = j;
  }
  return rep;
}

std::string SpectrumReport::to_text() const {
  std::ostringstream os;
  os.precision(15);
  os << "spectrum " << provenance << "\n";
  os << "  cluster_tolerance " << cluster_tolerance << "\n";
  os << "  ambiguous " << (ambiguous ? 1 : 0) << "\n";
  for (size_t i = 0; i < values.size(); ++i)
    os << "  value " << values[i] << " multiplicity " << multiplicities[i] << " cluster_diameter " << diameters[i]
       << "\n";
  return os.str();
}

namespace {

std::vector<double> expand(const SpectrumReport& r) {
  std::vector<double> out;
  for (size_t i = 0; i < r.values.size(); ++i)
    for (int m = 0; m < r.multiplicities[i]; ++m) out.push_back(r.values[i]);
  return out;
}

double one_sided_hausdorff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0;
  for (double x : a) {
    double best = 1e300;
    for (double y : b) best = std::min(best, std::abs(x - y));
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

SpectrumVerdict compare_spectra(const SpectrumReport& a, const SpectrumReport& b, SpectrumCompareMode mode,
                                double tol) {
  SpectrumVerdict v;
  if (mode == SpectrumCompareMode::Multiset) {
    std::vector<double> ea = expand(a), eb = expand(b);
    if (ea.size() != eb.size()) {
      v.pass = false;
      v.deviation = 1e300;
      v.detail = "dimension mismatch";
      return v;
    }
    double dev = 0;
    for (size_t i = 0; i < ea.size(); ++i) dev = std::max(dev, std::abs(ea[i] - eb[i]));
    v.deviation = dev;
    v.pass = dev <= tol;
    v.detail = "sorted pairwise max deviation";
    return v;
  }
  const double ab = one_sided_hausdorff(a.values, b.values);
  const double ba = one_sided_hausdorff(b.values, a.values);
  v.deviation = std::max(ab, ba);
  v.left_subset = ab <= tol;
  v.right_subset = ba <= tol;
  v.pass = v.left_subset && v.right_subset;
  v.detail = "Hausdorff distance of clustered value sets";
  return v;
}

}  // namespace isospec
