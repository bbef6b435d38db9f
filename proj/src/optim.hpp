#pragma once

#include <Eigen/Dense>

#include <functional>
#include <utility>
#include <vector>

namespace prismknot::detail {

// Compact Nelder-Mead minimizer (dimensions are tiny here).
inline std::pair<Eigen::VectorXd, double> nelder_mead(
    const std::function<double(const Eigen::VectorXd&)>& f, Eigen::VectorXd start,
    double step, int max_iter) {
  const int n = static_cast<int>(start.size());
  std::vector<std::pair<double, Eigen::VectorXd>> simplex;
  simplex.reserve(n + 1);
  simplex.emplace_back(f(start), start);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd p = start;
    p[i] += step;
    simplex.emplace_back(f(p), p);
  }
  auto by_value = [](const auto& a, const auto& b) { return a.first < b.first; };
  for (int it = 0; it < max_iter; ++it) {
    std::sort(simplex.begin(), simplex.end(), by_value);
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) centroid += simplex[i].second / n;
    const auto& worst = simplex[n];
    Eigen::VectorXd refl = centroid + (centroid - worst.second);
    double fr = f(refl);
    if (fr < simplex[0].first) {
      Eigen::VectorXd exp = centroid + 2.0 * (centroid - worst.second);
      double fe = f(exp);
      simplex[n] = fe < fr ? std::make_pair(fe, exp) : std::make_pair(fr, refl);
    } else if (fr < simplex[n - 1].first) {
      simplex[n] = {fr, refl};
    } else {
      Eigen::VectorXd con = centroid + 0.5 * (worst.second - centroid);
      double fc = f(con);
      if (fc < worst.first) {
        simplex[n] = {fc, con};
      } else {
        for (int i = 1; i <= n; ++i) {
          simplex[i].second = simplex[0].second + 0.5 * (simplex[i].second - simplex[0].second);
          simplex[i].first = f(simplex[i].second);
        }
      }
    }
    if (std::fabs(simplex[n].first - simplex[0].first) < 1e-15 &&
        (simplex[n].second - simplex[0].second).norm() < 1e-12)
      break;
  }
  std::sort(simplex.begin(), simplex.end(), by_value);
  return {simplex[0].second, simplex[0].first};
}

}  // namespace prismknot::detail
