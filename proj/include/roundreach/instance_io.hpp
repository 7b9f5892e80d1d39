#ifndef ROUNDREACH_INSTANCE_IO_HPP
#define ROUNDREACH_INSTANCE_IO_HPP

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "roundreach/linalg.hpp"
#include "roundreach/qbf.hpp"
#include "roundreach/system.hpp"

namespace roundreach {

inline constexpr const char* kInstanceVersion = "roundreach/1";

struct RationalInstance {
    RationalSystem system;
    /// Optional change of basis with M P = P J.
    std::optional<Matrix> p;
    std::optional<Matrix> j;
    /// Present for compiled QBF instances.
    std::optional<HardnessMeta> meta;
};

using Instance = std::variant<JnfSystem, RationalInstance>;

// Instance files are JSON objects:
//
//   {"version": "roundreach/1", "kind": "jnf",
//    "rounding": {"shape": "polar", "kind": "floor", "r": 2, "g": "1"},
//    "blocks": [{"size": 1, "modulus": "1", "angle": "1/2 pi"}],
//    "initial": [{"re": "4", "im": "0"}], "target": [{"modulus": "4", "angle": "1/2 pi"}]}
//
//   {"version": "roundreach/1", "kind": "rational",
//    "rounding": {"shape": "argand", "kind": "floor", "g": "1"},
//    "matrix": [["2", "0"], ["0", "1/2"]], "initial": ["3", "8"], "target": ["12", "2"]}
//
// Large rational systems use "sparse_matrix": {"dimension": n, "entries": [[row, col, "v"], ...]}.
// Unknown fields are rejected.

Instance parse_instance(std::string_view json_text);
Instance load_instance(const std::string& path);

/// Canonical form: sorted keys, rationals as "p/q" strings, two-space indent,
/// trailing newline. Dense matrices up to dimension 32, sparse above.
std::string serialize_instance(const Instance& instance);
void save_instance(const Instance& instance, const std::string& path);

Instance to_instance(const HardnessInstance& hardness);

std::size_t instance_dimension(const Instance& instance);

} // namespace roundreach

#endif
