#pragma once

#include <string>
#include <vector>

namespace kgef::svg {

struct Series {
  std::string name;
  std::vector<double> values;  // one per category
  std::string color;
};

/// Grouped (or stacked) vertical bar chart.
std::string bar_chart(const std::string& title, const std::vector<std::string>& categories,
                      const std::vector<Series>& series, bool stacked = false);

struct TreemapItem {
  std::string label;
  double value = 0.0;
  std::string color;
};

/// Slice-and-dice treemap, one rectangle per item, areas proportional to value.
std::string treemap(const std::string& title, const std::vector<TreemapItem>& items);

std::string escape(std::string_view text);

}  // namespace kgef::svg
