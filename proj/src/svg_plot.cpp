#include "gvfd/svg_plot.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace gvfd {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

std::string comparison_svg(const std::vector<BatchSummary>& batches, const std::string& title) {
  constexpr double kWidth = 480, kHeight = 360;
  constexpr double kLeft = 60, kRight = 20, kTop = 40, kBottom = 50;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto y_of = [&](double r) { return kTop + plot_h * (1.0 - std::clamp(r, 0.0, 1.0)); };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"12\">\n"
      "<rect width=\"{0}\" height=\"{1}\" fill=\"white\"/>\n"
      "<text x=\"{2}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{3}</text>\n",
      kWidth, kHeight, kWidth / 2, escape(title));

  for (int i = 0; i <= 10; ++i) {
    const double r = i / 10.0;
    const double y = y_of(r);
    svg += fmt::format(
        "<line x1=\"{0}\" y1=\"{1:.2f}\" x2=\"{2}\" y2=\"{1:.2f}\" stroke=\"#e0e0e0\"/>\n",
        kLeft, y, kLeft + plot_w);
    if (i % 2 == 0) {
      svg += fmt::format("<text x=\"{}\" y=\"{:.2f}\" text-anchor=\"end\">{:.1f}</text>\n",
                         kLeft - 6, y + 4, r);
    }
  }
  svg += fmt::format(
      "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n"
      "<line x1=\"{0}\" y1=\"{2}\" x2=\"{3}\" y2=\"{2}\" stroke=\"black\"/>\n"
      "<text x=\"16\" y=\"{4}\" transform=\"rotate(-90 16 {4})\" text-anchor=\"middle\">"
      "mean reward (greedy evaluation)</text>\n",
      kLeft, kTop, kTop + plot_h, kLeft + plot_w, kTop + plot_h / 2);

  const double slot = batches.empty() ? plot_w : plot_w / static_cast<double>(batches.size());
  for (std::size_t i = 0; i < batches.size(); ++i) {
    const BatchSummary& b = batches[i];
    const double x = kLeft + slot * (static_cast<double>(i) + 0.5);
    const double y = y_of(b.eval_mean);
    const double y_lo = y_of(b.eval_mean - b.eval_se);
    const double y_hi = y_of(b.eval_mean + b.eval_se);
    svg += fmt::format(
        "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>\n"
        "<line x1=\"{3:.2f}\" y1=\"{1:.2f}\" x2=\"{4:.2f}\" y2=\"{1:.2f}\" stroke=\"black\"/>\n"
        "<line x1=\"{3:.2f}\" y1=\"{2:.2f}\" x2=\"{4:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>\n"
        "<circle cx=\"{0:.2f}\" cy=\"{5:.2f}\" r=\"5\" fill=\"#1f77b4\"/>\n"
        "<text x=\"{0:.2f}\" y=\"{6}\" text-anchor=\"middle\">{7}</text>\n"
        "<text x=\"{8:.2f}\" y=\"{9:.2f}\">{10:.3f}</text>\n",
        x, y_lo, y_hi, x - 8, x + 8, y, kTop + plot_h + 20, escape(b.label), x + 10, y + 4,
        b.eval_mean);
  }
  svg += "</svg>\n";
  return svg;
}

std::string comparison_csv(const std::vector<BatchSummary>& batches) {
  std::string out = "config,n_trials,n_failed,eval_mean,eval_se\n";
  for (const auto& b : batches) {
    out += fmt::format("{},{},{},{},{}\n", b.label, b.n_trials, b.n_failed, b.eval_mean, b.eval_se);
  }
  return out;
}

}  // namespace gvfd
