#include "roundreach/rotation.hpp"

#include <cctype>
#include <fstream>
#include <ostream>
#include <unordered_map>

#include "interval.hpp"

namespace roundreach {

using detail::BigFloat;

// ---------------------------------------------------------------------------
// Angle expressions

struct RotationAngle::Node {
    enum class Kind { Number, Pi, Add, Sub, Mul, Div, Pow, Neg } kind = Kind::Number;
    Rational value;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const RotationAngle::Node>;
using Kind = RotationAngle::Node::Kind;

NodePtr make_node(Kind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr, Rational value = 0)
{
    auto n = std::make_shared<RotationAngle::Node>();
    n->kind = kind;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    n->value = std::move(value);
    return n;
}

class ExprParser {
public:
    explicit ExprParser(std::string_view text) : text_(text) {}

    NodePtr parse()
    {
        auto e = sum();
        skip();
        if (pos_ != text_.size()) {
            fail(ErrorCode::Parse, "unexpected text in angle at offset " + std::to_string(pos_));
        }
        return e;
    }

private:
    void skip()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])) != 0) {
            ++pos_;
        }
    }

    bool take(char c)
    {
        skip();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    bool starts_primary()
    {
        skip();
        if (pos_ >= text_.size()) {
            return false;
        }
        const char c = text_[pos_];
        return std::isdigit(static_cast<unsigned char>(c)) != 0 || c == '(' || c == '.' ||
               text_.substr(pos_, 2) == "pi";
    }

    NodePtr sum()
    {
        auto lhs = product();
        while (true) {
            if (take('+')) {
                lhs = make_node(Kind::Add, lhs, product());
            } else if (take('-')) {
                lhs = make_node(Kind::Sub, lhs, product());
            } else {
                return lhs;
            }
        }
    }

    NodePtr product()
    {
        auto lhs = power();
        while (true) {
            if (take('*')) {
                lhs = make_node(Kind::Mul, lhs, power());
            } else if (take('/')) {
                lhs = make_node(Kind::Div, lhs, power());
            } else if (starts_primary()) {
                lhs = make_node(Kind::Mul, lhs, power());
            } else {
                return lhs;
            }
        }
    }

    NodePtr power()
    {
        auto base = unary();
        if (take('^')) {
            return make_node(Kind::Pow, base, power());
        }
        return base;
    }

    NodePtr unary()
    {
        if (take('-')) {
            return make_node(Kind::Neg, unary());
        }
        return primary();
    }

    NodePtr primary()
    {
        skip();
        if (take('(')) {
            auto e = sum();
            if (!take(')')) {
                fail(ErrorCode::Parse, "missing ')' in angle");
            }
            return e;
        }
        if (text_.substr(pos_, 2) == "pi") {
            pos_ += 2;
            return make_node(Kind::Pi);
        }
        const auto start = pos_;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) != 0 || text_[pos_] == '.')) {
            ++pos_;
        }
        if (start == pos_) {
            fail(ErrorCode::Parse, "expected a number, 'pi' or '(' in angle at offset " + std::to_string(pos_));
        }
        return make_node(Kind::Number, nullptr, nullptr, parse_rational(text_.substr(start, pos_ - start)));
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

// coefficient * pi^power, when the expression has that exact form.
struct Symbolic {
    Rational coef;
    std::int64_t power = 0;
};

std::optional<Rational> exact_root(const Rational& base, const Rational& exponent)
{
    // base^(p/q) is rational iff numerator and denominator are perfect q-th powers.
    if (exponent.get_den() > 64 || abs_of(exponent) > 64 || sgn(base) <= 0) {
        return std::nullopt;
    }
    const auto q = exponent.get_den().get_ui();
    Integer num;
    Integer den;
    if (mpz_root(num.get_mpz_t(), base.get_num_mpz_t(), q) == 0 ||
        mpz_root(den.get_mpz_t(), base.get_den_mpz_t(), q) == 0) {
        return std::nullopt;
    }
    Rational root = make_rational(num, den);
    Rational out = 1;
    const long p = exponent.get_num().get_si();
    for (long i = 0; i < std::labs(p); ++i) {
        out *= root;
    }
    return p < 0 ? Rational(1 / out) : out;
}

std::optional<Symbolic> symbolic(const RotationAngle::Node& n)
{
    switch (n.kind) {
    case Kind::Number:
        return Symbolic{n.value, 0};
    case Kind::Pi:
        return Symbolic{Rational(1), 1};
    case Kind::Neg: {
        auto a = symbolic(*n.lhs);
        if (a) {
            a->coef = -a->coef;
        }
        return a;
    }
    default:
        break;
    }
    auto a = symbolic(*n.lhs);
    auto b = symbolic(*n.rhs);
    if (!a || !b) {
        return std::nullopt;
    }
    switch (n.kind) {
    case Kind::Add:
    case Kind::Sub: {
        const Rational rb = n.kind == Kind::Add ? b->coef : Rational(-b->coef);
        if (sgn(a->coef) == 0) {
            return Symbolic{rb, b->power};
        }
        if (sgn(b->coef) == 0) {
            return a;
        }
        if (a->power != b->power) {
            return std::nullopt;
        }
        return Symbolic{a->coef + rb, a->power};
    }
    case Kind::Mul:
        return Symbolic{a->coef * b->coef, a->power + b->power};
    case Kind::Div:
        if (sgn(b->coef) == 0) {
            fail(ErrorCode::InvalidArgument, "division by zero in angle");
        }
        return Symbolic{a->coef / b->coef, a->power - b->power};
    case Kind::Pow: {
        if (b->power != 0) {
            return std::nullopt;
        }
        if (b->coef.get_den() == 1 && abs_of(b->coef) <= 64) {
            const long e = b->coef.get_num().get_si();
            Rational out = 1;
            for (long i = 0; i < std::labs(e); ++i) {
                out *= a->coef;
            }
            if (e < 0) {
                if (sgn(out) == 0) {
                    fail(ErrorCode::InvalidArgument, "division by zero in angle");
                }
                out = 1 / out;
            }
            return Symbolic{out, a->power * e};
        }
        if (a->power != 0) {
            return std::nullopt;
        }
        if (auto r = exact_root(a->coef, b->coef)) {
            return Symbolic{*r, 0};
        }
        return std::nullopt;
    }
    default:
        return std::nullopt;
    }
}

struct Interval {
    explicit Interval(mpfr_prec_t p) : lo(p), hi(p) {}
    BigFloat lo;
    BigFloat hi;
};

void min_max_of(Interval& out, const Interval& a, const Interval& b,
                int (*op)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t), mpfr_prec_t p)
{
    BigFloat t(p);
    bool first = true;
    for (const auto* x : {&a.lo, &a.hi}) {
        for (const auto* y : {&b.lo, &b.hi}) {
            op(t.get(), x->get(), y->get(), MPFR_RNDD);
            if (first || mpfr_less_p(t.get(), out.lo.get())) {
                mpfr_set(out.lo.get(), t.get(), MPFR_RNDD);
            }
            op(t.get(), x->get(), y->get(), MPFR_RNDU);
            if (first || mpfr_greater_p(t.get(), out.hi.get())) {
                mpfr_set(out.hi.get(), t.get(), MPFR_RNDU);
            }
            first = false;
        }
    }
}

Interval evaluate(const RotationAngle::Node& n, mpfr_prec_t p)
{
    Interval out(p);
    switch (n.kind) {
    case Kind::Number:
        mpfr_set_q(out.lo.get(), n.value.get_mpq_t(), MPFR_RNDD);
        mpfr_set_q(out.hi.get(), n.value.get_mpq_t(), MPFR_RNDU);
        return out;
    case Kind::Pi:
        mpfr_const_pi(out.lo.get(), MPFR_RNDD);
        mpfr_const_pi(out.hi.get(), MPFR_RNDU);
        return out;
    case Kind::Neg: {
        const auto a = evaluate(*n.lhs, p);
        mpfr_neg(out.lo.get(), a.hi.get(), MPFR_RNDD);
        mpfr_neg(out.hi.get(), a.lo.get(), MPFR_RNDU);
        return out;
    }
    default:
        break;
    }
    const auto a = evaluate(*n.lhs, p);
    const auto b = evaluate(*n.rhs, p);
    switch (n.kind) {
    case Kind::Add:
        mpfr_add(out.lo.get(), a.lo.get(), b.lo.get(), MPFR_RNDD);
        mpfr_add(out.hi.get(), a.hi.get(), b.hi.get(), MPFR_RNDU);
        break;
    case Kind::Sub:
        mpfr_sub(out.lo.get(), a.lo.get(), b.hi.get(), MPFR_RNDD);
        mpfr_sub(out.hi.get(), a.hi.get(), b.lo.get(), MPFR_RNDU);
        break;
    case Kind::Mul:
        min_max_of(out, a, b, mpfr_mul, p);
        break;
    case Kind::Div:
        if (mpfr_sgn(b.lo.get()) <= 0 && mpfr_sgn(b.hi.get()) >= 0) {
            fail(ErrorCode::InvalidArgument, "angle divides by an interval containing zero");
        }
        min_max_of(out, a, b, mpfr_div, p);
        break;
    case Kind::Pow:
        if (mpfr_sgn(a.lo.get()) <= 0) {
            fail(ErrorCode::InvalidArgument, "non-integer powers need a positive base");
        }
        min_max_of(out, a, b, mpfr_pow, p);
        break;
    default:
        break;
    }
    return out;
}

} // namespace

RotationAngle RotationAngle::parse(std::string_view text)
{
    RotationAngle out;
    out.text_ = std::string(text);
    out.expr_ = ExprParser(text).parse();
    if (auto s = symbolic(*out.expr_); s && (s->power == 1 || sgn(s->coef) == 0)) {
        if (abs_of(s->coef) > Rational(1000000) || s->coef.get_den() > 1000000) {
            fail(ErrorCode::TooLarge, "angle denominator too large for exact rotation");
        }
        out.exact_ = Angle::from_pi_fraction(s->coef);
    }
    return out;
}

RotationAngle RotationAngle::from_angle(const Angle& angle)
{
    return parse(to_string(angle.pi_fraction()) + " pi");
}

const Angle& RotationAngle::angle() const
{
    if (!exact_) {
        fail(ErrorCode::UnsupportedAngle, "angle '" + text_ + "' is not a rational multiple of pi");
    }
    return *exact_;
}

void RotationAngle::enclose(mpfr_ptr lo, mpfr_ptr hi, mpfr_prec_t precision) const
{
    const auto iv = evaluate(*expr_, precision + 16);
    mpfr_set(lo, iv.lo.get(), MPFR_RNDD);
    mpfr_set(hi, iv.hi.get(), MPFR_RNDU);
}

double RotationAngle::approx() const
{
    BigFloat lo(64);
    BigFloat hi(64);
    enclose(lo.get(), hi.get(), 64);
    return mpfr_get_d(lo.get(), MPFR_RNDN);
}

// ---------------------------------------------------------------------------
// Rotation

namespace {

constexpr mpfr_prec_t kIntervalStart = 64;
constexpr mpfr_prec_t kIntervalCap = 4096;

struct TrigLevel {
    explicit TrigLevel(mpfr_prec_t p) : cos(p), sin(p) {}
    Interval cos;
    Interval sin;
};

// cos/sin of the angle enclosure, widened by the angle's radius (|d/dx| <= 1).
TrigLevel trig_at(const RotationAngle& angle, mpfr_prec_t p)
{
    const mpfr_prec_t w = p + 32;
    BigFloat lo(w);
    BigFloat hi(w);
    angle.enclose(lo.get(), hi.get(), w);
    BigFloat mid(w);
    BigFloat radius(w);
    mpfr_add(mid.get(), lo.get(), hi.get(), MPFR_RNDN);
    mpfr_div_2ui(mid.get(), mid.get(), 1, MPFR_RNDN);
    BigFloat a(w);
    BigFloat b(w);
    mpfr_sub(a.get(), hi.get(), mid.get(), MPFR_RNDU);
    mpfr_sub(b.get(), mid.get(), lo.get(), MPFR_RNDU);
    mpfr_max(radius.get(), a.get(), b.get(), MPFR_RNDU);
    BigFloat slack(w);
    mpfr_set_ui_2exp(slack.get(), 1, -(w - 2), MPFR_RNDU);
    mpfr_add(radius.get(), radius.get(), slack.get(), MPFR_RNDU);

    TrigLevel out(w);
    BigFloat c(w);
    BigFloat s(w);
    mpfr_sin_cos(s.get(), c.get(), mid.get(), MPFR_RNDN);
    mpfr_sub(out.cos.lo.get(), c.get(), radius.get(), MPFR_RNDD);
    mpfr_add(out.cos.hi.get(), c.get(), radius.get(), MPFR_RNDU);
    mpfr_sub(out.sin.lo.get(), s.get(), radius.get(), MPFR_RNDD);
    mpfr_add(out.sin.hi.get(), s.get(), radius.get(), MPFR_RNDU);
    return out;
}

// Encloses x*u + y*v for exact integers x, y.
void combine(Interval& out, std::int64_t x, const Interval& u, std::int64_t y, const Interval& v, mpfr_prec_t w)
{
    BigFloat t(w);
    auto scaled = [&](std::int64_t k, const Interval& iv, bool upper, mpfr_ptr dst) {
        // k * iv: choose the endpoint by the sign of k.
        const auto& endpoint = (k >= 0) == upper ? iv.hi : iv.lo;
        mpfr_mul_si(dst, endpoint.get(), k, upper ? MPFR_RNDU : MPFR_RNDD);
    };
    scaled(x, u, false, out.lo.get());
    scaled(y, v, false, t.get());
    mpfr_add(out.lo.get(), out.lo.get(), t.get(), MPFR_RNDD);
    scaled(x, u, true, out.hi.get());
    scaled(y, v, true, t.get());
    mpfr_add(out.hi.get(), out.hi.get(), t.get(), MPFR_RNDU);
}

// floor(v + 1/2) when both endpoints agree.
std::optional<std::int64_t> round_half_up(const Interval& v, mpfr_prec_t w)
{
    BigFloat t(w);
    mpfr_add_d(t.get(), v.lo.get(), 0.5, MPFR_RNDD);
    mpfr_floor(t.get(), t.get());
    const long lo = mpfr_get_si(t.get(), MPFR_RNDN);
    mpfr_add_d(t.get(), v.hi.get(), 0.5, MPFR_RNDU);
    mpfr_floor(t.get(), t.get());
    const long hi = mpfr_get_si(t.get(), MPFR_RNDN);
    if (lo != hi) {
        return std::nullopt;
    }
    return lo;
}

} // namespace

struct Rotator::Impl {
    RotationAngle angle;
    bool exact = false;
    std::int64_t order = 4;
    CycloNum lambda;
    std::vector<TrigLevel> levels;
};

Rotator::Rotator(const RotationAngle& angle, RotationPath path) : impl_(std::make_unique<Impl>())
{
    impl_->angle = angle;
    impl_->exact = path == RotationPath::Exact || (path == RotationPath::Auto && angle.is_exact());
    if (impl_->exact) {
        const Angle& a = angle.angle();
        impl_->order = field_order_for({a}, 0);
        impl_->lambda = embed_polar(Rational(1), a, impl_->order);
    }
}

Rotator::~Rotator() = default;
Rotator::Rotator(Rotator&&) noexcept = default;
Rotator& Rotator::operator=(Rotator&&) noexcept = default;

bool Rotator::exact_path() const noexcept
{
    return impl_->exact;
}

LatticePoint Rotator::apply(LatticePoint p)
{
    if (p.x == 0 && p.y == 0) {
        return p;
    }
    if (impl_->exact) {
        const CycloNum z = impl_->lambda * CycloNum::from_cartesian(Rational(p.x), Rational(p.y), impl_->order);
        const Rational half(1, 2);
        return {floor_real_part(z, half).get_si(), floor_imag_part(z, half).get_si()};
    }
    std::size_t level = 0;
    for (mpfr_prec_t prec = kIntervalStart; prec <= kIntervalCap; prec *= 2, ++level) {
        if (impl_->levels.size() <= level) {
            impl_->levels.push_back(trig_at(impl_->angle, prec));
        }
        const auto& t = impl_->levels[level];
        const mpfr_prec_t w = mpfr_get_prec(t.cos.lo.get());
        Interval re(w);
        Interval im(w);
        Interval neg_sin(w);
        mpfr_neg(neg_sin.lo.get(), t.sin.hi.get(), MPFR_RNDD);
        mpfr_neg(neg_sin.hi.get(), t.sin.lo.get(), MPFR_RNDU);
        combine(re, p.x, t.cos, p.y, neg_sin, w);
        combine(im, p.x, t.sin, p.y, t.cos, w);
        const auto rx = round_half_up(re, w);
        const auto ry = round_half_up(im, w);
        if (rx && ry) {
            return {*rx, *ry};
        }
    }
    fail(ErrorCode::UndecidableTie, "cannot certify the rounding of (" + std::to_string(p.x) + ", " +
                                        std::to_string(p.y) + ") within " + std::to_string(kIntervalCap) +
                                        " bits");
}

LatticePoint rotate_round(LatticePoint p, const RotationAngle& angle, RotationPath path)
{
    Rotator r(angle, path);
    return r.apply(p);
}

namespace {

struct PointHash {
    std::size_t operator()(const LatticePoint& p) const noexcept
    {
        return std::hash<std::int64_t>()(p.x) * 1000003u ^ std::hash<std::int64_t>()(p.y);
    }
};

} // namespace

OrbitRecord run_orbit(LatticePoint start, Rotator& rotator, std::uint64_t budget, bool keep_visited)
{
    OrbitRecord rec;
    rec.start = start;
    std::unordered_map<LatticePoint, std::uint64_t, PointHash> seen;
    LatticePoint p = start;
    try {
        for (std::uint64_t step = 0;; ++step) {
            auto [it, fresh] = seen.emplace(p, step);
            if (!fresh) {
                rec.transient = it->second;
                rec.period = step - it->second;
                break;
            }
            if (keep_visited) {
                rec.visited.emplace_back(p, step);
            }
            if (step == budget) {
                break;
            }
            p = rotator.apply(p);
        }
    } catch (const Error& e) {
        if (e.code() != ErrorCode::UndecidableTie) {
            throw;
        }
        rec.error = e.what();
    }
    return rec;
}

std::size_t disk_point_count(std::int64_t radius)
{
    std::size_t count = 0;
    for (std::int64_t x = -radius; x <= radius; ++x) {
        for (std::int64_t y = -radius; y <= radius; ++y) {
            if (x * x + y * y <= radius * radius) {
                ++count;
            }
        }
    }
    return count;
}

GridReport run_disk(std::int64_t radius, const RotationAngle& angle, std::uint64_t budget, RotationPath path)
{
    if (radius < 0) {
        fail(ErrorCode::InvalidArgument, "radius must be nonnegative");
    }
    if (budget == 0) {
        fail(ErrorCode::InvalidArgument, "budget must be positive");
    }
    GridReport report;
    report.radius = radius;
    report.angle = angle.text();
    Rotator rotator(angle, path);
    for (std::int64_t x = -radius; x <= radius; ++x) {
        for (std::int64_t y = -radius; y <= radius; ++y) {
            if (x * x + y * y > radius * radius) {
                continue;
            }
            auto rec = run_orbit({x, y}, rotator, budget, true);
            for (const auto& [pt, step] : rec.visited) {
                auto [it, fresh] = report.cells.emplace(pt, step);
                if (!fresh && step < it->second) {
                    it->second = step;
                }
            }
            if (rec.period) {
                report.max_transient = std::max(report.max_transient, rec.transient);
                report.max_period = std::max(report.max_period, *rec.period);
            } else {
                report.unresolved.push_back(rec.start);
            }
            rec.visited.clear();
            rec.visited.shrink_to_fit();
            report.orbits.push_back(std::move(rec));
        }
    }
    return report;
}

void emit_grid(const GridReport& report, std::ostream& out)
{
    out << "x,y,first_generation\n";
    for (const auto& [pt, gen] : report.cells) {
        out << pt.x << ',' << pt.y << ',' << gen << '\n';
    }
}

void emit_grid(const GridReport& report, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        fail(ErrorCode::Io, "cannot open '" + path + "' for writing");
    }
    emit_grid(report, out);
    if (!out) {
        fail(ErrorCode::Io, "failed writing '" + path + "'");
    }
}

} // namespace roundreach
