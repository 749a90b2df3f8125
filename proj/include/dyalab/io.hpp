#ifndef DYALAB_IO_HPP_
#define DYALAB_IO_HPP_

#include <string>

#include "json.hpp"

#include "dyalab/function.hpp"
#include "dyalab/grid.hpp"

namespace dyalab {

/// Function interchange: a JSON list of terms
///   {"coeff": "num/den" | "a + b*sqrt2", "factors": [{"kind", "scale", "pos", "ratio"?}, ...]}
/// where kind is "haar", "indicator" or "tail" (tails carry "ratio"). A factor may
/// give "eps" instead of "kind": 0 reads as h_I and 1 as h^1_I = |I|^{-1/2} 1_I.
nlohmann::json function_to_json(const DyadicFunction& f);
DyadicFunction function_from_json(const nlohmann::json& j);

nlohmann::json grid_to_json(const GridFunction& g);

// Throws std::runtime_error on I/O or parse failure.
nlohmann::json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace dyalab

#endif  // DYALAB_IO_HPP_
