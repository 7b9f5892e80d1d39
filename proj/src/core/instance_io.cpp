#include "roundreach/instance_io.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

namespace roundreach {

using Json = nlohmann::json;

namespace {

constexpr std::size_t kDenseLimit = 32;

void check_keys(const Json& obj, std::initializer_list<const char*> allowed, const std::string& where)
{
    if (!obj.is_object()) {
        fail(ErrorCode::Parse, where + " must be a JSON object");
    }
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed) {
            ok = ok || key == a;
        }
        if (!ok) {
            fail(ErrorCode::Parse, "unknown field '" + key + "' in " + where);
        }
    }
}

const Json& field(const Json& obj, const char* key, const std::string& where)
{
    auto it = obj.find(key);
    if (it == obj.end()) {
        fail(ErrorCode::Parse, "missing field '" + std::string(key) + "' in " + where);
    }
    return *it;
}

Rational read_rational(const Json& v, const std::string& where)
{
    if (v.is_string()) {
        return parse_rational(v.get<std::string>());
    }
    if (v.is_number_integer()) {
        return Rational(Integer(v.dump()));
    }
    fail(ErrorCode::Parse, where + ": expected a rational as a \"p/q\" string");
}

Angle read_angle(const Json& v, const std::string& where)
{
    if (!v.is_string()) {
        fail(ErrorCode::Parse, where + ": expected an angle as a \"p/q pi\" string");
    }
    return Angle::parse(v.get<std::string>());
}

std::int64_t read_int(const Json& v, const std::string& where)
{
    if (!v.is_number_integer()) {
        fail(ErrorCode::Parse, where + ": expected an integer");
    }
    return v.get<std::int64_t>();
}

const Json& read_array(const Json& v, const std::string& where)
{
    if (!v.is_array()) {
        fail(ErrorCode::Parse, where + " must be an array");
    }
    return v;
}

RoundingSpec read_rounding(const Json& v)
{
    check_keys(v, {"shape", "kind", "r", "g"}, "rounding");
    const auto shape = field(v, "shape", "rounding");
    const auto kind = parse_rounding_kind(field(v, "kind", "rounding").get<std::string>());
    const Rational g = v.contains("g") ? read_rational(v["g"], "rounding.g") : Rational(1);
    if (shape == "argand") {
        if (v.contains("r")) {
            fail(ErrorCode::Parse, "argand rounding takes no 'r'");
        }
        return RoundingSpec::argand(kind, g);
    }
    if (shape == "polar") {
        return RoundingSpec::polar(kind, read_int(field(v, "r", "rounding"), "rounding.r"), g);
    }
    fail(ErrorCode::Parse, "rounding.shape must be \"argand\" or \"polar\"");
}

Json write_rounding(const RoundingSpec& spec)
{
    Json out = Json::object();
    out["shape"] = spec.shape == Shape::Polar ? "polar" : "argand";
    out["kind"] = rounding_name(spec.kind);
    out["g"] = to_string(spec.g);
    if (spec.shape == Shape::Polar) {
        out["r"] = spec.r;
    }
    return out;
}

ComplexValue read_complex(const Json& v, const std::string& where)
{
    if (v.is_string() || v.is_number_integer()) {
        return Cartesian{read_rational(v, where), Rational(0)};
    }
    if (v.is_object() && v.contains("modulus")) {
        check_keys(v, {"modulus", "angle"}, where);
        return PolarValue{read_rational(v["modulus"], where), read_angle(field(v, "angle", where), where)};
    }
    check_keys(v, {"re", "im"}, where);
    return Cartesian{read_rational(field(v, "re", where), where),
                     v.contains("im") ? read_rational(v["im"], where) : Rational(0)};
}

Json write_complex(const ComplexValue& v)
{
    Json out = Json::object();
    if (const auto* c = std::get_if<Cartesian>(&v)) {
        out["re"] = to_string(c->re);
        out["im"] = to_string(c->im);
    } else {
        const auto& p = std::get<PolarValue>(v);
        out["modulus"] = to_string(p.modulus);
        out["angle"] = p.angle.to_string();
    }
    return out;
}

std::vector<ComplexValue> read_complex_vector(const Json& v, const std::string& where)
{
    std::vector<ComplexValue> out;
    for (const auto& e : read_array(v, where)) {
        out.push_back(read_complex(e, where));
    }
    return out;
}

RationalVector read_vector(const Json& v, const std::string& where)
{
    RationalVector out;
    for (const auto& e : read_array(v, where)) {
        out.push_back(read_rational(e, where));
    }
    return out;
}

Json write_vector(const RationalVector& v)
{
    Json out = Json::array();
    for (const auto& x : v) {
        out.push_back(to_string(x));
    }
    return out;
}

Matrix read_dense(const Json& v, const std::string& where)
{
    std::vector<RationalVector> rows;
    for (const auto& row : read_array(v, where)) {
        rows.push_back(read_vector(row, where));
    }
    if (rows.empty()) {
        fail(ErrorCode::InvalidArgument, where + " is empty");
    }
    for (const auto& r : rows) {
        if (r.size() != rows.size()) {
            fail(ErrorCode::InvalidArgument, where + " must be square");
        }
    }
    return Matrix(rows);
}

Json write_dense(const Matrix& m)
{
    Json out = Json::array();
    for (const auto& row : m.to_rows()) {
        out.push_back(write_vector(row));
    }
    return out;
}

RowSparseMatrix read_sparse(const Json& v)
{
    check_keys(v, {"dimension", "entries"}, "sparse_matrix");
    const auto n = read_int(field(v, "dimension", "sparse_matrix"), "sparse_matrix.dimension");
    if (n <= 0) {
        fail(ErrorCode::InvalidArgument, "sparse_matrix.dimension must be positive");
    }
    RowSparseMatrix m(static_cast<std::size_t>(n));
    for (const auto& e : read_array(field(v, "entries", "sparse_matrix"), "sparse_matrix.entries")) {
        if (!e.is_array() || e.size() != 3) {
            fail(ErrorCode::Parse, "sparse_matrix entries are [row, col, \"value\"] triples");
        }
        const auto r = read_int(e[0], "sparse_matrix row");
        const auto c = read_int(e[1], "sparse_matrix column");
        if (r < 0 || c < 0 || r >= n || c >= n) {
            fail(ErrorCode::InvalidArgument, "sparse_matrix entry out of range");
        }
        m.set(static_cast<std::size_t>(r), static_cast<std::size_t>(c), read_rational(e[2], "sparse_matrix value"));
    }
    return m;
}

Json write_sparse(const RowSparseMatrix& m)
{
    Json entries = Json::array();
    for (std::size_t r = 0; r < m.size(); ++r) {
        for (const auto& [c, v] : m.row(r)) {
            entries.push_back(Json::array({r, c, to_string(v)}));
        }
    }
    Json out = Json::object();
    out["dimension"] = m.size();
    out["entries"] = std::move(entries);
    return out;
}

HardnessMeta read_meta(const Json& v)
{
    check_keys(v, {"n", "ell", "m", "t", "dimension", "family", "factor"}, "meta");
    HardnessMeta meta;
    auto count = [&](const char* key) {
        const auto x = read_int(field(v, key, "meta"), std::string("meta.") + key);
        if (x < 0) {
            fail(ErrorCode::InvalidArgument, std::string("meta.") + key + " must be nonnegative");
        }
        return static_cast<std::size_t>(x);
    };
    meta.n = count("n");
    meta.ell = count("ell");
    meta.m = count("m");
    meta.t = count("t");
    meta.dimension = count("dimension");
    meta.family = parse_family(field(v, "family", "meta").get<std::string>());
    meta.factor = read_rational(field(v, "factor", "meta"), "meta.factor");
    return meta;
}

Json write_meta(const HardnessMeta& meta)
{
    Json out = Json::object();
    out["n"] = meta.n;
    out["ell"] = meta.ell;
    out["m"] = meta.m;
    out["t"] = meta.t;
    out["dimension"] = meta.dimension;
    out["family"] = family_name(meta.family);
    out["factor"] = to_string(meta.factor);
    return out;
}

Instance read_jnf(const Json& doc)
{
    check_keys(doc, {"version", "kind", "rounding", "blocks", "initial", "target"}, "jnf instance");
    std::vector<JordanBlock> blocks;
    for (const auto& b : read_array(field(doc, "blocks", "instance"), "blocks")) {
        check_keys(b, {"size", "modulus", "angle"}, "block");
        JordanBlock block;
        block.size = read_int(field(b, "size", "block"), "block.size");
        block.modulus = read_rational(field(b, "modulus", "block"), "block.modulus");
        block.angle = b.contains("angle") ? read_angle(b["angle"], "block.angle") : Angle();
        blocks.push_back(block);
    }
    return JnfSystem(std::move(blocks), read_complex_vector(field(doc, "initial", "instance"), "initial"),
                     read_complex_vector(field(doc, "target", "instance"), "target"),
                     read_rounding(field(doc, "rounding", "instance")));
}

Instance read_rational_instance(const Json& doc)
{
    check_keys(doc, {"version", "kind", "rounding", "matrix", "sparse_matrix", "initial", "target", "p", "j", "meta"},
               "rational instance");
    RowSparseMatrix m;
    if (doc.contains("matrix") == doc.contains("sparse_matrix")) {
        fail(ErrorCode::Parse, "rational instance needs exactly one of 'matrix' and 'sparse_matrix'");
    }
    if (doc.contains("matrix")) {
        m = RowSparseMatrix::from_dense(read_dense(doc["matrix"], "matrix"));
    } else {
        m = read_sparse(doc["sparse_matrix"]);
    }
    RationalInstance out{RationalSystem(std::move(m), read_vector(field(doc, "initial", "instance"), "initial"),
                                        read_vector(field(doc, "target", "instance"), "target"),
                                        read_rounding(field(doc, "rounding", "instance"))),
                         std::nullopt, std::nullopt, std::nullopt};
    if (doc.contains("p") != doc.contains("j")) {
        fail(ErrorCode::Parse, "'p' and 'j' must be given together");
    }
    if (doc.contains("p")) {
        out.p = read_dense(doc["p"], "p");
        out.j = read_dense(doc["j"], "j");
        if (out.p->rows() != out.system.dimension() || out.j->rows() != out.system.dimension()) {
            fail(ErrorCode::InvalidArgument, "'p' and 'j' must match the system dimension");
        }
    }
    if (doc.contains("meta")) {
        out.meta = read_meta(doc["meta"]);
    }
    return out;
}

} // namespace

Instance parse_instance(std::string_view json_text)
{
    Json doc;
    try {
        doc = Json::parse(json_text);
    } catch (const Json::parse_error& e) {
        fail(ErrorCode::Parse, std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        fail(ErrorCode::Parse, "instance must be a JSON object");
    }
    const auto& version = field(doc, "version", "instance");
    if (version != kInstanceVersion) {
        fail(ErrorCode::Parse, "unsupported instance version " + version.dump());
    }
    const auto& kind = field(doc, "kind", "instance");
    try {
        if (kind == "jnf") {
            return read_jnf(doc);
        }
        if (kind == "rational") {
            return read_rational_instance(doc);
        }
    } catch (const Json::exception& e) {
        fail(ErrorCode::Parse, std::string("malformed instance: ") + e.what());
    }
    fail(ErrorCode::Parse, "instance kind must be \"jnf\" or \"rational\"");
}

Instance load_instance(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(ErrorCode::Io, "cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_instance(buf.str());
}

std::string serialize_instance(const Instance& instance)
{
    Json doc = Json::object();
    doc["version"] = kInstanceVersion;
    if (const auto* jnf = std::get_if<JnfSystem>(&instance)) {
        doc["kind"] = "jnf";
        doc["rounding"] = write_rounding(jnf->spec());
        Json blocks = Json::array();
        for (const auto& b : jnf->blocks()) {
            Json jb = Json::object();
            jb["size"] = b.size;
            jb["modulus"] = to_string(b.modulus);
            jb["angle"] = b.angle.to_string();
            blocks.push_back(std::move(jb));
        }
        doc["blocks"] = std::move(blocks);
        Json init = Json::array();
        for (const auto& v : jnf->raw_initial()) {
            init.push_back(write_complex(v));
        }
        Json target = Json::array();
        for (const auto& v : jnf->raw_target()) {
            target.push_back(write_complex(v));
        }
        doc["initial"] = std::move(init);
        doc["target"] = std::move(target);
    } else {
        const auto& r = std::get<RationalInstance>(instance);
        doc["kind"] = "rational";
        doc["rounding"] = write_rounding(r.system.spec());
        if (r.system.dimension() <= kDenseLimit) {
            doc["matrix"] = write_dense(r.system.matrix().to_dense());
        } else {
            doc["sparse_matrix"] = write_sparse(r.system.matrix());
        }
        doc["initial"] = write_vector(r.system.raw_initial());
        doc["target"] = write_vector(r.system.raw_target());
        if (r.p) {
            doc["p"] = write_dense(*r.p);
            doc["j"] = write_dense(*r.j);
        }
        if (r.meta) {
            doc["meta"] = write_meta(*r.meta);
        }
    }
    return doc.dump(2) + "\n";
}

void save_instance(const Instance& instance, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        fail(ErrorCode::Io, "cannot open '" + path + "' for writing");
    }
    out << serialize_instance(instance);
    if (!out) {
        fail(ErrorCode::Io, "failed writing '" + path + "'");
    }
}

Instance to_instance(const HardnessInstance& hardness)
{
    return RationalInstance{hardness.system, std::nullopt, std::nullopt, hardness.meta};
}

std::size_t instance_dimension(const Instance& instance)
{
    if (const auto* jnf = std::get_if<JnfSystem>(&instance)) {
        return jnf->dimension();
    }
    return std::get<RationalInstance>(instance).system.dimension();
}

} // namespace roundreach
