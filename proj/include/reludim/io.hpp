#pragma once

#include "reludim/family.hpp"
#include "reludim/network.hpp"

#include <string>
#include <vector>

namespace reludim {

struct LoadedNetwork {
  Parameter param;
  std::string number_mode;  // "rational" (default) or "float64"
};

/// {"architecture":[1,2,1], "weights":[[[...]]], "biases":[[...]],
///  "number_mode":"rational"} with rationals as "p/q" strings or JSON
/// numbers (both parsed exactly). Networks with output width != 1 are
/// rejected at load.
LoadedNetwork load_network(const std::string& path);
void save_network(const Parameter& param, const std::string& number_mode,
                  const std::string& path);

/// {"points": [[...], ...]}
std::vector<std::vector<Rational>> load_batch(const std::string& path);
void save_batch(const std::vector<std::vector<Rational>>& batch, const std::string& path);

/// {"D": 3, "slots": ["t1", "t2", "t3", "t3-t1^2+t2^2"]}
PolyFamily load_family(const std::string& path);

/// Polynomial matrices round-trip through JSON with the text encoding:
/// {"rows":m, "cols":n, "arity":D, "entries":[["t1+1", ...], ...]}
std::string poly_matrix_to_json(const PolyMatrix& m);
PolyMatrix poly_matrix_from_json(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace reludim
