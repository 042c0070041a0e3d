#include "kgef/report.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "kgef/common.hpp"

namespace kgef::svg {

namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 400;
constexpr double kLeft = 60;
constexpr double kRight = 20;
constexpr double kTop = 40;
constexpr double kBottom = 60;

std::string num(double v) { return format_fixed(v, 2); }

void open(std::ostringstream& out, const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\"" << num(kHeight)
      << "\" viewBox=\"0 0 " << num(kWidth) << ' ' << num(kHeight) << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << num(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"16\">" << escape(title) << "</text>\n";
}

}  // namespace

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string bar_chart(const std::string& title, const std::vector<std::string>& categories,
                      const std::vector<Series>& series, bool stacked) {
  for (const auto& s : series) {
    if (s.values.size() != categories.size()) throw Error("series " + s.name + " does not match the categories");
  }
  double max_value = 0.0;
  for (std::size_t c = 0; c < categories.size(); ++c) {
    double sum = 0.0;
    for (const auto& s : series) {
      sum += s.values[c];
      max_value = std::max(max_value, s.values[c]);
    }
    if (stacked) max_value = std::max(max_value, sum);
  }
  if (max_value <= 0.0) max_value = 1.0;

  std::ostringstream out;
  open(out, title);
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const double base = kTop + plot_h;
  out << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(base) << "\" x2=\"" << num(kWidth - kRight) << "\" y2=\""
      << num(base) << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(kTop + 4) << "\" text-anchor=\"end\" "
      << "font-family=\"sans-serif\" font-size=\"10\">" << num(max_value) << "</text>\n";

  const double group_w = categories.empty() ? plot_w : plot_w / static_cast<double>(categories.size());
  const double bars = stacked || series.empty() ? 1.0 : static_cast<double>(series.size());
  const double bar_w = group_w * 0.8 / bars;
  for (std::size_t c = 0; c < categories.size(); ++c) {
    const double gx = kLeft + group_w * static_cast<double>(c) + group_w * 0.1;
    double stack = 0.0;
    for (std::size_t s = 0; s < series.size(); ++s) {
      const double h = plot_h * series[s].values[c] / max_value;
      const double x = stacked ? gx : gx + bar_w * static_cast<double>(s);
      const double y = stacked ? base - stack - h : base - h;
      stack += stacked ? h : 0.0;
      out << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(bar_w) << "\" height=\"" << num(h)
          << "\" fill=\"" << series[s].color << "\"><title>" << escape(series[s].name) << " / "
          << escape(categories[c]) << ": " << num(series[s].values[c]) << "</title></rect>\n";
    }
    out << "<text x=\"" << num(gx + group_w * 0.4) << "\" y=\"" << num(base + 16)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << escape(categories[c])
        << "</text>\n";
  }
  for (std::size_t s = 0; s < series.size(); ++s) {
    const double y = kHeight - 20;
    const double x = kLeft + 130.0 * static_cast<double>(s);
    out << "<rect x=\"" << num(x) << "\" y=\"" << num(y - 10) << "\" width=\"10\" height=\"10\" fill=\""
        << series[s].color << "\"/>\n"
        << "<text x=\"" << num(x + 14) << "\" y=\"" << num(y) << "\" font-family=\"sans-serif\" font-size=\"11\">"
        << escape(series[s].name) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string treemap(const std::string& title, const std::vector<TreemapItem>& items) {
  std::ostringstream out;
  open(out, title);
  const double total = std::accumulate(items.begin(), items.end(), 0.0,
                                       [](double acc, const TreemapItem& i) { return acc + std::max(0.0, i.value); });
  double x = kLeft, y = kTop;
  double w = kWidth - kLeft - kRight, h = kHeight - kTop - kBottom;
  double remaining = total;
  bool vertical = w >= h;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const double v = std::max(0.0, items[i].value);
    if (v == 0.0 || remaining <= 0.0) continue;
    const double share = i + 1 == items.size() ? 1.0 : v / remaining;
    double rw = w, rh = h;
    if (vertical) {
      rw = w * share;
    } else {
      rh = h * share;
    }
    out << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(rw) << "\" height=\"" << num(rh)
        << "\" fill=\"" << items[i].color << "\" stroke=\"white\"><title>" << escape(items[i].label) << ": "
        << num(v) << "</title></rect>\n"
        << "<text x=\"" << num(x + 4) << "\" y=\"" << num(y + 14) << "\" font-family=\"sans-serif\" font-size=\"11\">"
        << escape(items[i].label) << " (" << num(100.0 * v / total) << "%)</text>\n";
    if (vertical) {
      x += rw;
      w -= rw;
    } else {
      y += rh;
      h -= rh;
    }
    remaining -= v;
    vertical = w >= h;
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace kgef::svg
