#pragma once

// Instance files, check suites and JSON reports behind the qistate tool.
//
// Instance schema (complex numbers are [re, im], indices 0-based):
//   {
//     "algebra":    {"block_dims": [n_1, ..., n_k]},
//     "state":      {"density": [block][row][col] -> [re, im]},
//     "generators": [{"perm": [pi(0), ...], "unitaries": [block][row][col]}],
//     "tolerances": {"tol_eq": 1e-9, "tol_pos": 1e-10, "tol_herm": 1e-10},  optional
//     "closure_cap": 10000                                                    optional
//   }

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "qistate/actions.hpp"
#include "qistate/algebra.hpp"
#include "qistate/check.hpp"

namespace qistate::cli {

using nlohmann::json;

std::string tool_version();

struct Instance {
  AlgebraDescriptor descriptor;
  State phi;
  std::vector<Automorphism> generators;
  Tolerances tol;
  std::size_t closure_cap = default_closure_cap;
  std::string digest;  // sha256 of the raw file contents
};

/// Throws InputError naming the offending field path.
Instance parse_instance(std::string_view text);
Instance load_instance(const std::string& path);

struct Options {
  std::optional<double> tol_eq;
  std::optional<double> tol_pos;
  std::optional<std::size_t> closure_cap;
  double grid_R = 100.0;
  int grid_N = 1001;
  std::uint64_t seed = 1;
};

struct Report {
  std::string command;
  std::string digest;
  CheckList checks;
  json summary = json::object();
  json artifacts = json::object();

  bool pass() const { return all_pass(checks); }
  /// Keys are sorted, so equal inputs give byte-identical output apart from
  /// the timestamp field.
  json to_json(bool with_timestamp = true) const;
};

Report cmd_check(const Instance& inst, const Options& opt = {});
Report cmd_invariant(const Instance& inst, const Options& opt = {});
Report cmd_implement(const Instance& inst, const Options& opt = {});
Report cmd_expectation(const Instance& inst, const Options& opt = {});
Report cmd_trace(const Instance& inst, const Options& opt = {});
Report cmd_counterexample(const Options& opt = {});

json element_to_json(const AlgebraElement& a);
AlgebraElement element_from_json(const json& j, const AlgebraDescriptor& desc, const std::string& path);

std::string sha256_hex(std::string_view data);

}  // namespace qistate::cli
