#pragma once

// Versioned JSON text format for atoms. Exponential-sum pieces store their
// terms as [re, im, freq] triples; numeric pieces store the name and
// parameters of the builder that reconstructs their evaluator.

#include <filesystem>
#include <string>
#include <vector>

#include "gaborlab/tfcore.hpp"
#include "json.hpp"

namespace gaborlab {

inline constexpr int kAtomFormatVersion = 1;
inline constexpr const char* kAtomFormatName = "gaborlab-atom";

/// Rebuilds a numeric piece from a named builder. Throws a format error for
/// unknown names or malformed parameters.
NumericPiece make_numeric(const Interval& interval, const NumericBuilder& builder);
std::vector<std::string> numeric_builder_names();

/// c0 + c1 x.
NumericPiece affine_piece(const Interval& interval, double c0, double c1);
/// sqrt(level - |inner(x)|^2), clamped at zero.
NumericPiece sqrt_complement_piece(const Interval& interval, double level,
                                   const PiecewiseAtom& inner);
/// beta g(x) / sum_k |g(x - alpha k)|^2.
NumericPiece painless_dual_piece(const Interval& interval, const PiecewiseAtom& numerator,
                                 double alpha, double beta);
/// Unit L^2 Gaussian (pi sigma^2)^{-1/4} e^{-t^2 / (2 sigma^2)} on [-12 sigma, 12 sigma).
NumericPiece gaussian_piece(double sigma);

nlohmann::json to_json(const PiecewiseAtom& atom);
PiecewiseAtom atom_from_json(const nlohmann::json& doc);

std::string serialize_atom(const PiecewiseAtom& atom);
PiecewiseAtom parse_atom(const std::string& text);

void save_atom(const std::filesystem::path& path, const PiecewiseAtom& atom);
PiecewiseAtom load_atom(const std::filesystem::path& path);

}  // namespace gaborlab
