#include <algorithm>
#include <cmath>
#include <iterator>
#include <map>
#include <vector>

#include <fmt/format.h>

#include "powdiv/harness.hpp"

namespace powdiv {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

std::string render_convergence_chart(std::span<const SweepRow> rows, ChartQuantity quantity,
                                     double truth) {
  const bool is_mu = quantity == ChartQuantity::mu;
  std::map<long long, std::vector<double>> by_n;
  for (const auto& r : rows) {
    const double v = is_mu ? r.mu_hat : r.a_hat;
    if (r.n > 0 && std::isfinite(v)) by_n[r.n].push_back(v);
  }

  double xmin = 0.0, xmax = 1.0;
  if (!by_n.empty()) {
    xmin = std::floor(std::log10(static_cast<double>(by_n.begin()->first)));
    xmax = std::ceil(std::log10(static_cast<double>(by_n.rbegin()->first)));
  }
  if (xmax - xmin < 1.0) {
    xmin -= 0.5;
    xmax += 0.5;
  }

  double ymin = truth, ymax = truth;
  for (const auto& [n, vals] : by_n)
    for (double v : vals) {
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  if (ymax - ymin < 1e-9) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const double pad = 0.08 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto sx = [&](double lx) { return kLeft + (lx - xmin) / (xmax - xmin) * plot_w; };
  auto sy = [&](double y) { return kTop + (ymax - y) / (ymax - ymin) * plot_h; };

  std::string svg;
  auto out = std::back_inserter(svg);
  fmt::format_to(out,
                 "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
                 "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0:.0f}\" height=\"{1:.0f}\" "
                 "viewBox=\"0 0 {0:.0f} {1:.0f}\" font-family=\"sans-serif\" font-size=\"12\">\n",
                 kWidth, kHeight);
  fmt::format_to(out, "<rect x=\"0\" y=\"0\" width=\"{:.0f}\" height=\"{:.0f}\" fill=\"white\"/>\n",
                 kWidth, kHeight);
  fmt::format_to(out, "<text x=\"{:.2f}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
                 kWidth / 2, is_mu ? "Estimate of mu against sample size" : "Estimate of a against sample size");

  // Axes box.
  fmt::format_to(out,
                 "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"none\" "
                 "stroke=\"black\"/>\n",
                 kLeft, kTop, plot_w, plot_h);

  for (int k = static_cast<int>(std::ceil(xmin)); k <= static_cast<int>(std::floor(xmax)); ++k) {
    const double x = sx(k);
    fmt::format_to(out, "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>\n",
                   x, kTop + plot_h, kTop + plot_h + 5);
    fmt::format_to(out, "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">1e{}</text>\n", x,
                   kTop + plot_h + 20, k);
  }
  for (int i = 0; i <= 4; ++i) {
    const double y = ymin + i * (ymax - ymin) / 4;
    const double py = sy(y);
    fmt::format_to(out, "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"black\"/>\n",
                   kLeft - 5, py, kLeft);
    fmt::format_to(out, "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{:.4g}</text>\n", kLeft - 8,
                   py + 4, y);
  }
  fmt::format_to(out, "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">log10(n)</text>\n",
                 kLeft + plot_w / 2, kHeight - 10);
  fmt::format_to(out,
                 "<text x=\"16\" y=\"{0:.2f}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {0:.2f})\">{1}</text>\n",
                 kTop + plot_h / 2, is_mu ? "mu_hat" : "a_hat");

  fmt::format_to(out,
                 "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"gray\" "
                 "stroke-dasharray=\"6 4\"/>\n",
                 kLeft, sy(truth), kLeft + plot_w, sy(truth));

  std::string medians;
  for (const auto& [n, vals] : by_n) {
    const double x = sx(std::log10(static_cast<double>(n)));
    for (double v : vals)
      fmt::format_to(out, "<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"2.5\" fill=\"steelblue\" fill-opacity=\"0.6\"/>\n",
                     x, sy(v));
    fmt::format_to(std::back_inserter(medians), "{}{:.2f},{:.2f}", medians.empty() ? "" : " ", x,
                   sy(median_of(vals)));
  }
  if (!medians.empty())
    fmt::format_to(out, "<polyline points=\"{}\" fill=\"none\" stroke=\"firebrick\" stroke-width=\"1.5\"/>\n",
                   medians);
  svg += "</svg>\n";
  return svg;
}

}  // namespace powdiv
