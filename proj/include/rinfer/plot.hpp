#pragma once

#include <string>
#include <vector>

#include "rinfer/diagnostics.hpp"

namespace rinfer {

// Self-contained SVG p-value-vs-tau curve with the selection threshold line.
std::string svg_p_curve(const WindowSelectionResult& sel);

// Self-contained SVG bar chart of per-window estimates with p-values
// overlaid on a secondary 0..1 axis and a reference line at alpha.
std::string svg_effect_bars(const std::vector<int>& taus,
                            const std::vector<double>& estimates,
                            const std::vector<double>& p_values, double alpha);

}  // namespace rinfer
