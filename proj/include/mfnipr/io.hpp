#pragma once

#include <iosfwd>
#include <string>

#include "mfnipr/ccg.hpp"
#include "mfnipr/netgen.hpp"

namespace mfnipr {

// Decimal string with at most `max_frac` fraction digits, trailing zeros
// trimmed; the instance schema stores reals this way for bit-stable parsing.
std::string format_decimal(double value, int max_frac = 6);
double parse_decimal(const std::string& text, const std::string& field);

// Fixed 9-significant-digit formatting used by result files and CSV.
std::string format_real(double value);

std::string instance_to_json(const Instance& instance);
Instance instance_from_json(const std::string& text);

void save_instance(const Instance& instance, const std::string& path);
Instance load_instance(const std::string& path);

// Interdiction plan file: {"interdict": [node ids]}.
InterdictionPlan plan_from_json(const std::string& text, std::size_t num_nodes);
InterdictionPlan load_plan(const std::string& path, std::size_t num_nodes);

// Sorted (tail, head, side) triples, the plan serialization used in results.
std::string result_to_json(const Instance& instance, double budget, const CcgConfig& config,
                           const CcgResult& result, bool include_timing = true);

}  // namespace mfnipr
