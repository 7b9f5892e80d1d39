#include "roundreach/hyperbolic.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

#include "lockstep.hpp"

namespace roundreach {

namespace {

Integer pow_int(const Integer& base, std::int64_t e)
{
    Integer out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(e));
    return out;
}

// Grid points with |x| <= c on the real line.
Integer real_count(const Rational& c, const Rational& g)
{
    return 2 * floor_of(c / g) + 1;
}

Integer complex_count(const Rational& c, const RoundingSpec& spec)
{
    if (spec.shape == Shape::Argand && floor_of(c / spec.g) > 1000000) {
        const Integer side = real_count(c, spec.g);
        return side * side;
    }
    return kball_count(c, spec);
}

bool block_is_real(const JnfSystem& system, std::size_t b)
{
    const auto& block = system.blocks()[b];
    if (system.spec().shape != Shape::Argand) {
        return false;
    }
    if (!(block.angle == Angle(0, 1) || block.angle == Angle(1, 1))) {
        return false;
    }
    const auto offset = system.block_offset(b);
    for (std::size_t k = 0; k < static_cast<std::size_t>(block.size); ++k) {
        if (sgn(std::get<ArgandPoint>(system.initial().points[offset + k]).im) != 0) {
            return false;
        }
    }
    return true;
}

// Modulus effect of the rounding on one block coordinate. Argand rounding of a
// complex value moves it by at most sqrt(2) * Delta; 17/12 > sqrt(2).
Rational block_delta(const JnfSystem& system, std::size_t b)
{
    const Rational delta = effect_bound(system.spec());
    if (system.spec().shape == Shape::Argand && !block_is_real(system, b)) {
        return delta * Rational(17, 12);
    }
    return delta;
}

std::vector<Rational> moduli_bounds(const std::vector<GridPoint>& points, std::size_t offset, std::size_t size)
{
    std::vector<Rational> out;
    for (std::size_t k = 0; k < size; ++k) {
        out.push_back(detail::modulus_upper_bound(grid_modulus_sq(points[offset + k])));
    }
    return out;
}

RadiusTable block_table(const JnfSystem& system, std::size_t b)
{
    const auto& block = system.blocks()[b];
    const auto offset = system.block_offset(b);
    const auto size = static_cast<std::size_t>(block.size);
    auto table = radii(block, block_delta(system, b), moduli_bounds(system.target().points, offset, size),
                       moduli_bounds(system.initial().points, offset, size), system.spec().g);
    Integer count = 1;
    const bool real = block_is_real(system, b);
    for (const auto& c : table.c) {
        count *= real ? real_count(c, system.spec().g) : complex_count(c, system.spec());
    }
    table.step_bound = std::max(table.hypercube, count);
    return table;
}

class HyperbolicMonitor final : public detail::BlockMonitor {
public:
    HyperbolicMonitor(const JnfSystem& system, std::size_t block)
        : view_(detail::block_view(system, block)), table_(block_table(system, block)),
          expanding_(system.blocks()[block].modulus > 1)
    {
        for (const auto& c : table_.c) {
            c_sq_.push_back(c * c);
        }
    }

    detail::Observation start(const State& initial) override { return check(initial); }

    detail::Observation observe(std::uint64_t, const State&, const State& after) override { return check(after); }

private:
    detail::Observation check(const State& s)
    {
        for (std::size_t k = view_.size; k-- > 0;) {
            const Rational m = grid_modulus_sq(s.points[view_.offset + k]);
            if (expanding_) {
                if (m >= c_sq_[k]) {
                    return detail::Observation::concluded(EscapedRadius{view_.offset + k + 1, table_.c[k]});
                }
            } else {
                ensure(m <= c_sq_[k], "contracting block left its escape radius");
            }
        }
        return detail::Observation::bounded(table_.step_bound);
    }

    detail::BlockView view_;
    RadiusTable table_;
    bool expanding_;
    std::vector<Rational> c_sq_;
};

} // namespace

RadiusTable radii(const JordanBlock& block, const Rational& delta, const std::vector<Rational>& target,
                  const std::vector<Rational>& initial, const Rational& g)
{
    if (block.modulus == 1) {
        fail(ErrorCode::ModulusOne, "escape radii need an eigenvalue of modulus other than 1");
    }
    const auto d = static_cast<std::size_t>(block.size);
    if (target.size() != d || initial.size() != d) {
        fail(ErrorCode::InvalidArgument, "radii: vectors must match the block size");
    }
    RadiusTable t;
    t.ell = std::max(Rational(1), delta);
    for (const auto* v : {&target, &initial}) {
        for (const auto& x : *v) {
            t.ell = std::max(t.ell, abs_of(x));
        }
    }
    const Rational gap = abs_of(block.modulus - 1);
    t.c.assign(d, Rational(0));
    t.c[d - 1] = delta / gap + t.ell;
    for (std::size_t k = d - 1; k-- > 0;) {
        t.c[k] = (delta + t.c[k + 1]) / gap + t.ell;
    }
    const Rational cmax = *std::max_element(t.c.begin(), t.c.end());
    t.hypercube = pow_int(ceil_of(2 * cmax / g), block.size);
    t.step_bound = t.hypercube;
    return t;
}

std::vector<RadiusTable> hyperbolic_bounds(const JnfSystem& system)
{
    std::vector<RadiusTable> out;
    for (std::size_t b = 0; b < system.blocks().size(); ++b) {
        out.push_back(block_table(system, b));
    }
    return out;
}

Verdict decide_hyperbolic_jnf(const JnfSystem& system, const DecideOptions& options)
{
    for (const auto& block : system.blocks()) {
        if (block.modulus == 1) {
            fail(ErrorCode::ModulusOne, "system has an eigenvalue of modulus 1");
        }
    }
    return decide_jnf(system, options);
}

namespace detail {

std::unique_ptr<BlockMonitor> make_hyperbolic_monitor(const JnfSystem& system, std::size_t block,
                                                      const DecideOptions& options)
{
    auto monitor = std::make_unique<HyperbolicMonitor>(system, block);
    log_event(options, "block " + std::to_string(block + 1) + ": escape radii");
    return monitor;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Change of basis

RationalVector ConjugatedRounding::apply(const RationalVector& z) const
{
    RationalVector x = p * z;
    for (auto& v : x) {
        v = round_real(v, spec.kind, spec.g);
    }
    return p_inv * x;
}

ConjugatedRounding conjugate_rounding(const Matrix& p, const RoundingSpec& spec)
{
    if (spec.shape != Shape::Argand) {
        fail(ErrorCode::UnsupportedCombination, "change of basis needs an Argand rounding");
    }
    ConjugatedRounding out{p, p.inverse(), spec, Rational(0)};
    out.delta = effect_bound(spec) * out.p_inv.row_norm();
    return out;
}

namespace {

std::vector<Integer> divisors(Integer n)
{
    if (n < 0) {
        n = -n;
    }
    if (n == 0) {
        return {};
    }
    std::map<Integer, int> factors;
    for (unsigned long p = 2; p <= 1000000 && Integer(p) * p <= n; ++p) {
        while (mpz_divisible_ui_p(n.get_mpz_t(), p) != 0) {
            ++factors[Integer(p)];
            n /= p;
        }
    }
    if (n > 1) {
        if (n > Integer(1000000) * 1000000 && mpz_probab_prime_p(n.get_mpz_t(), 30) == 0) {
            fail(ErrorCode::TooLarge, "characteristic polynomial coefficients too large to factor");
        }
        ++factors[n];
    }
    std::vector<Integer> out{1};
    for (const auto& [p, e] : factors) {
        const auto current = out.size();
        Integer power = 1;
        for (int i = 0; i < e; ++i) {
            power *= p;
            for (std::size_t j = 0; j < current; ++j) {
                out.push_back(out[j] * power);
            }
        }
    }
    return out;
}

Rational eval_poly(const RationalVector& c, const Rational& x)
{
    Rational acc = 0;
    for (std::size_t i = c.size(); i-- > 0;) {
        acc = acc * x + c[i];
    }
    return acc;
}

RationalVector deflate(const RationalVector& c, const Rational& root)
{
    // Synthetic division by (x - root).
    RationalVector q(c.size() - 1);
    Rational carry = 0;
    for (std::size_t i = c.size(); i-- > 1;) {
        carry = carry * root + c[i];
        q[i - 1] = carry;
    }
    return q;
}

std::vector<std::pair<Rational, std::int64_t>> rational_roots(RationalVector c)
{
    std::vector<std::pair<Rational, std::int64_t>> roots;
    std::int64_t zero = 0;
    while (c.size() > 1 && sgn(c[0]) == 0) {
        c.erase(c.begin());
        ++zero;
    }
    if (zero > 0) {
        roots.emplace_back(Rational(0), zero);
    }
    if (c.size() > 1) {
        Integer lcd = 1;
        for (const auto& x : c) {
            mpz_lcm(lcd.get_mpz_t(), lcd.get_mpz_t(), x.get_den_mpz_t());
        }
        const Integer a0 = Rational(c.front() * lcd).get_num();
        const Integer an = Rational(c.back() * lcd).get_num();
        const auto ps = divisors(a0);
        const auto qs = divisors(an);
        std::vector<Rational> candidates;
        for (const auto& p : ps) {
            for (const auto& q : qs) {
                candidates.push_back(make_rational(p, q));
                candidates.push_back(make_rational(-p, q));
            }
        }
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
        for (const auto& r : candidates) {
            std::int64_t mult = 0;
            while (c.size() > 1 && sgn(eval_poly(c, r)) == 0) {
                c = deflate(c, r);
                ++mult;
            }
            if (mult > 0) {
                roots.emplace_back(r, mult);
            }
        }
    }
    if (c.size() > 1) {
        fail(ErrorCode::NonrationalSpectrum, "characteristic polynomial has non-rational roots");
    }
    std::sort(roots.begin(), roots.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    return roots;
}

RationalVector mat_vec(const Matrix& m, const RationalVector& v)
{
    return m * v;
}

Matrix with_columns(const std::vector<RationalVector>& cols, std::size_t n)
{
    Matrix m(n, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
        for (std::size_t r = 0; r < n; ++r) {
            m(r, c) = cols[c][r];
        }
    }
    return m;
}

std::size_t rank_of(const std::vector<RationalVector>& vectors, std::size_t n)
{
    if (vectors.empty()) {
        return 0;
    }
    return with_columns(vectors, n).rank();
}

} // namespace

JordanForm jnf_rational(const Matrix& m)
{
    if (!m.is_square() || m.rows() == 0) {
        fail(ErrorCode::InvalidArgument, "Jordan form needs a non-empty square matrix");
    }
    constexpr std::size_t kMaxSize = 64;
    const std::size_t n = m.rows();
    if (n > kMaxSize) {
        fail(ErrorCode::TooLarge, "automatic Jordan form is limited to dimension " + std::to_string(kMaxSize));
    }
    const auto roots = rational_roots(m.characteristic_polynomial());

    JordanForm out;
    std::vector<RationalVector> columns;
    for (const auto& [lambda, multiplicity] : roots) {
        const Matrix nil = m - Matrix::identity(n).scaled(lambda);
        // Kernels of nil^j until they reach the algebraic multiplicity.
        std::vector<std::vector<RationalVector>> kernels{{}};
        Matrix power = Matrix::identity(n);
        while (static_cast<std::int64_t>(kernels.back().size()) < multiplicity) {
            power = power * nil;
            kernels.push_back(power.kernel());
            ensure(kernels.size() <= n + 1, "generalized eigenspace did not stabilise");
        }
        const std::size_t top = kernels.size() - 1;
        auto at_least = [&](std::size_t s) -> std::size_t {
            return s > top ? 0 : kernels[s].size() - kernels[s - 1].size();
        };
        std::vector<std::vector<RationalVector>> chains;
        for (std::size_t s = top; s >= 1; --s) {
            const std::size_t wanted = at_least(s) - at_least(s + 1);
            if (wanted == 0) {
                continue;
            }
            std::vector<RationalVector> span = kernels[s - 1];
            for (const auto& chain : chains) {
                // chain = [nil^{t-1} v, ..., v]; its member in ker nil^s \ ker nil^{s-1}.
                span.push_back(chain[chain.size() - s]);
            }
            std::size_t r = rank_of(span, n);
            std::size_t found = 0;
            for (const auto& w : kernels[s]) {
                if (found == wanted) {
                    break;
                }
                span.push_back(w);
                const std::size_t r2 = rank_of(span, n);
                if (r2 == r) {
                    span.pop_back();
                    continue;
                }
                r = r2;
                std::vector<RationalVector> chain(s);
                chain[s - 1] = w;
                for (std::size_t i = s - 1; i-- > 0;) {
                    chain[i] = mat_vec(nil, chain[i + 1]);
                }
                chains.push_back(std::move(chain));
                ++found;
            }
            ensure(found == wanted, "Jordan chain construction failed");
        }
        std::stable_sort(chains.begin(), chains.end(),
                         [](const auto& a, const auto& b) { return a.size() > b.size(); });
        for (auto& chain : chains) {
            out.blocks.emplace_back(lambda, static_cast<std::int64_t>(chain.size()));
            for (auto& v : chain) {
                columns.push_back(std::move(v));
            }
        }
    }
    out.p = with_columns(columns, n);
    out.j = Matrix(n, n);
    std::size_t pos = 0;
    for (const auto& [lambda, size] : out.blocks) {
        for (std::int64_t k = 0; k < size; ++k) {
            out.j(pos + k, pos + k) = lambda;
            if (k + 1 < size) {
                out.j(pos + k, pos + k + 1) = 1;
            }
        }
        pos += static_cast<std::size_t>(size);
    }
    ensure(m * out.p == out.p * out.j, "computed Jordan form does not satisfy M P = P J");
    return out;
}

std::vector<std::pair<Rational, std::int64_t>> jordan_blocks_of(const Matrix& j)
{
    if (!j.is_square()) {
        fail(ErrorCode::ValidationFailed, "J must be square");
    }
    const std::size_t n = j.rows();
    std::vector<std::pair<Rational, std::int64_t>> blocks;
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            const bool allowed = c == r || c == r + 1;
            if (!allowed && sgn(j(r, c)) != 0) {
                fail(ErrorCode::ValidationFailed, "J is not upper bidiagonal");
            }
        }
    }
    std::size_t start = 0;
    for (std::size_t r = 0; r < n; ++r) {
        const bool link = r + 1 < n && sgn(j(r, r + 1)) != 0;
        if (link) {
            if (j(r, r + 1) != 1 || j(r, r) != j(r + 1, r + 1)) {
                fail(ErrorCode::ValidationFailed, "J superdiagonal must be 1 within a block of equal eigenvalues");
            }
            continue;
        }
        blocks.emplace_back(j(start, start), static_cast<std::int64_t>(r + 1 - start));
        start = r + 1;
    }
    return blocks;
}

GeneralBounds hyperbolic_general_bounds(const RationalSystem& system, const Matrix& p, const Matrix& j)
{
    const std::size_t n = system.dimension();
    if (p.rows() != n || p.cols() != n || j.rows() != n || j.cols() != n) {
        fail(ErrorCode::ValidationFailed, "P and J must match the system dimension");
    }
    GeneralBounds out{conjugate_rounding(p, system.spec()), jordan_blocks_of(j), {}, 0};
    if (system.matrix().to_dense() * p != p * j) {
        fail(ErrorCode::ValidationFailed, "M != P J P^-1");
    }
    const RationalVector z0 = out.rounding.p_inv * system.initial();
    const RationalVector zt = out.rounding.p_inv * system.target();
    std::size_t offset = 0;
    Rational cmax = 0;
    for (const auto& [lambda, size] : out.blocks) {
        if (abs_of(lambda) == 1) {
            fail(ErrorCode::ModulusOne, "eigenvalue " + to_string(lambda) + " has modulus 1");
        }
        JordanBlock block{size, abs_of(lambda), sgn(lambda) < 0 ? Angle(1, 1) : Angle()};
        std::vector<Rational> target;
        std::vector<Rational> initial;
        for (std::int64_t k = 0; k < size; ++k) {
            target.push_back(abs_of(zt[offset + static_cast<std::size_t>(k)]));
            initial.push_back(abs_of(z0[offset + static_cast<std::size_t>(k)]));
        }
        out.tables.push_back(radii(block, out.rounding.delta, target, initial, system.spec().g));
        for (const auto& c : out.tables.back().c) {
            cmax = std::max(cmax, c);
        }
        offset += static_cast<std::size_t>(size);
    }
    // x = P z stays within |x_i| <= ||P|| * max C on the grid.
    const Integer side = real_count(p.row_norm() * cmax, system.spec().g);
    out.step_bound = pow_int(side, static_cast<std::int64_t>(n));
    for (const auto& t : out.tables) {
        out.step_bound = std::max(out.step_bound, t.hypercube);
    }
    return out;
}

Verdict decide_hyperbolic_general(const RationalSystem& system, const Matrix& p, const Matrix& j,
                                  const DecideOptions& options)
{
    const auto bounds = hyperbolic_general_bounds(system, p, j);
    const auto& rounding = bounds.rounding;
    const Matrix jp = j;
    RationalVector z = rounding.p_inv * system.initial();
    const RationalVector target = rounding.p_inv * system.target();

    struct Radius {
        std::size_t index;
        Rational c;
        bool expanding;
    };
    std::vector<std::vector<Radius>> per_block;
    std::size_t offset = 0;
    for (std::size_t b = 0; b < bounds.blocks.size(); ++b) {
        const auto& [lambda, size] = bounds.blocks[b];
        std::vector<Radius> rs;
        for (std::int64_t k = 0; k < size; ++k) {
            rs.push_back({offset + static_cast<std::size_t>(k), bounds.tables[b].c[static_cast<std::size_t>(k)],
                          abs_of(lambda) > 1});
        }
        per_block.push_back(std::move(rs));
        offset += static_cast<std::size_t>(size);
    }

    std::unordered_set<RationalVector, RationalVectorHash> visited;
    bool storing = options.memory_budget > 0;
    for (std::uint64_t step = 0;; ++step) {
        if (z == target) {
            return Reached{step};
        }
        for (const auto& rs : per_block) {
            for (std::size_t k = rs.size(); k-- > 0;) {
                const Rational m = abs_of(z[rs[k].index]);
                if (rs[k].expanding) {
                    if (m >= rs[k].c) {
                        return NotReached{EscapedRadius{rs[k].index + 1, rs[k].c}, step};
                    }
                } else {
                    ensure(m <= rs[k].c, "contracting block left its escape radius");
                }
            }
        }
        if (Integer(static_cast<unsigned long>(step)) > bounds.step_bound) {
            return NotReached{CycleDetected{bounds.step_bound}, step};
        }
        if (storing) {
            if (!visited.insert(z).second) {
                return NotReached{CycleDetected{bounds.step_bound}, step};
            }
            if (visited.size() >= options.memory_budget) {
                storing = false;
                visited.clear();
            }
        }
        z = rounding.apply(jp * z);
    }
}

Verdict decide_hyperbolic_general(const RationalSystem& system, const DecideOptions& options)
{
    const auto form = jnf_rational(system.matrix().to_dense());
    detail::log_event(options, "computed Jordan form with " + std::to_string(form.blocks.size()) + " blocks");
    return decide_hyperbolic_general(system, form.p, form.j, options);
}

} // namespace roundreach
