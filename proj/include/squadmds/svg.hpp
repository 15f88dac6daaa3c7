#pragma once

#include <string>
#include <vector>

#include "squadmds/types.hpp"

namespace squadmds {

/// Renders an embedding as a self-contained SVG scatter plot and returns
/// the document text. Output is a pure function of the inputs: no
/// timestamps or environment leaks, so the same embedding always produces
/// the same bytes.
///
/// Coloring: with no labels every point uses one color. If every label
/// parses as a finite number the points get a sequential colormap over the
/// value range; otherwise labels are treated as categories (sorted
/// lexicographically, palette cycling).
///
/// Above 20000 points the marker radius and coordinate precision drop so
/// even very large plots stay well under tens of megabytes.
std::string plot_svg(const Embedding& emb, const std::vector<std::string>& labels = {},
                     int size_px = 1000);

void save_svg(const std::string& path, const std::string& svg_text);

}  // namespace squadmds
