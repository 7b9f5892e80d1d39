#ifndef ROUNDREACH_ROTATION_HPP
#define ROUNDREACH_ROTATION_HPP

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <mpfr.h>

#include "roundreach/numerics.hpp"

namespace roundreach {

struct LatticePoint {
    std::int64_t x = 0;
    std::int64_t y = 0;
    friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
};

/// A rotation angle: either an exact rational multiple of pi or a real
/// expression such as `2^(2/5)/10 pi` evaluated with certified intervals.
class RotationAngle {
public:
    struct Node;

    static RotationAngle parse(std::string_view text);
    static RotationAngle from_angle(const Angle& angle);

    bool is_exact() const noexcept { return exact_.has_value(); }
    /// Requires is_exact().
    const Angle& angle() const;
    const std::string& text() const noexcept { return text_; }

    /// Encloses the angle in radians; lo/hi are written at `precision` bits.
    void enclose(mpfr_ptr lo, mpfr_ptr hi, mpfr_prec_t precision) const;
    double approx() const;

private:
    std::string text_;
    std::optional<Angle> exact_;
    std::shared_ptr<const Node> expr_;
};

enum class RotationPath { Auto, Exact, Interval };

/// Rotation by a fixed angle followed by minimal-error rounding (ties up) of
/// both coordinates.
class Rotator {
public:
    Rotator(const RotationAngle& angle, RotationPath path = RotationPath::Auto);
    ~Rotator();
    Rotator(Rotator&&) noexcept;
    Rotator& operator=(Rotator&&) noexcept;

    /// Throws undecidable-tie when the interval path cannot certify the rounding.
    LatticePoint apply(LatticePoint p);
    bool exact_path() const noexcept;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

LatticePoint rotate_round(LatticePoint p, const RotationAngle& angle, RotationPath path = RotationPath::Auto);

struct OrbitRecord {
    LatticePoint start;
    std::uint64_t transient = 0;
    /// Absent when the budget ran out (or a tie aborted the orbit).
    std::optional<std::uint64_t> period;
    std::vector<std::pair<LatticePoint, std::uint64_t>> visited;
    std::optional<std::string> error;
};

/// Iterates until the first repeated state or `budget` steps.
OrbitRecord run_orbit(LatticePoint start, Rotator& rotator, std::uint64_t budget, bool keep_visited = true);

struct GridReport {
    std::int64_t radius = 0;
    std::string angle;
    std::map<LatticePoint, std::uint64_t> cells;
    std::vector<LatticePoint> unresolved;
    std::vector<OrbitRecord> orbits;
    std::uint64_t max_transient = 0;
    std::uint64_t max_period = 0;
};

/// Every lattice point with x^2 + y^2 <= r^2, first-visit generation per cell.
GridReport run_disk(std::int64_t radius, const RotationAngle& angle, std::uint64_t budget,
                    RotationPath path = RotationPath::Auto);

/// CSV `x,y,first_generation`, rows sorted by (x, y).
void emit_grid(const GridReport& report, std::ostream& out);
void emit_grid(const GridReport& report, const std::string& path);

std::size_t disk_point_count(std::int64_t radius);

} // namespace roundreach

#endif
