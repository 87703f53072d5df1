#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "permdiag/forest.hpp"
#include "permdiag/linear.hpp"
#include "permdiag/mlp.hpp"

namespace permdiag {

/// Self-describing line-oriented text serialization. Every real number is
/// written as the shortest decimal that parses back to the same double, so a
/// save/load cycle reproduces the model exactly.
std::string model_to_text(const LinearModel& m);
std::string model_to_text(const ForestModel& m);
std::string model_to_text(const MLPModel& m);

/// Kind tag of a serialized model ("linear", "forest", "mlp").
std::string model_kind(std::string_view text);

std::unique_ptr<Predictor> model_from_text(std::string_view text);

void save_model_file(const std::string& path, std::string_view text);
std::unique_ptr<Predictor> load_model_file(const std::string& path);

}  // namespace permdiag
