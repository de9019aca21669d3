// CSV and SVG output. Numbers round-trip at 17 significant digits, lines end
// with LF, and the header row is always present.
#pragma once

#include <span>
#include <string>
#include <vector>

#include "stiffnet/reference.hpp"

namespace stiffnet {

std::string format_full(double v);  // %.17g

void write_loss_csv(const std::string& path, std::span<const double> history);

// Columns: t, yhat_1..n[, ytruth_1..n when truth is non-empty].
void write_solution_csv(const std::string& path, std::span<const double> times,
                        std::span<const double> yhat, std::span<const double> truth, int n);

// Columns: t, y_1..n.
void write_reference_csv(const std::string& path, const ReferenceTrajectory& traj);

// Minimal self-contained SVG line chart; one polyline per series column.
void write_svg_chart(const std::string& path, const std::string& title,
                     std::span<const double> x, std::span<const double> series, int columns,
                     bool log_y);

}  // namespace stiffnet
