#include "lsm/network_io.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "lsm/errors.hpp"
#include "lsm/format.hpp"

namespace lsm {

using nlohmann::json;

namespace {

int line_of(const std::string& text, std::size_t byte)
{
    int line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i)
        if (text[i] == '\n')
            ++line;
    return line;
}

const json& field(const json& obj, const char* key, const std::string& where)
{
    if (!obj.is_object())
        throw SchemaError(where + ": expected an object");
    auto it = obj.find(key);
    if (it == obj.end())
        throw SchemaError(where + ": missing field '" + key + "'");
    return *it;
}

double number(const json& v, const std::string& where)
{
    if (!v.is_number())
        throw SchemaError(where + ": expected a number");
    return v.get<double>();
}

long integer(const json& v, const std::string& where)
{
    if (!v.is_number_integer())
        throw SchemaError(where + ": expected an integer");
    return v.get<long>();
}

Vector vec(const json& v, const std::string& where, Index expected = -1)
{
    if (!v.is_array())
        throw SchemaError(where + ": expected an array of numbers");
    if (expected >= 0 && static_cast<Index>(v.size()) != expected)
        throw SchemaError(where + ": expected " + std::to_string(expected) + " entries, found " +
                          std::to_string(v.size()));
    Vector out(static_cast<Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i)
        out(static_cast<Index>(i)) = number(v[i], where + "[" + std::to_string(i) + "]");
    return out;
}

json to_json(const Vector& v)
{
    json a = json::array();
    for (Index i = 0; i < v.size(); ++i)
        a.push_back(v(i));
    return a;
}

/// Dense ids 0..count-1, each exactly once; returns the position of each id.
std::vector<std::size_t> dense_ids(const json& arr, const std::string& what)
{
    std::vector<std::size_t> pos(arr.size(), arr.size());
    for (std::size_t k = 0; k < arr.size(); ++k) {
        const std::string where = what + "[" + std::to_string(k) + "]";
        const long id = integer(field(arr[k], "id", where), where + ".id");
        if (id < 0 || static_cast<std::size_t>(id) >= arr.size())
            throw SchemaError(where + ": id " + std::to_string(id) + " is outside 0.." +
                              std::to_string(arr.size() - 1));
        if (pos[static_cast<std::size_t>(id)] != arr.size())
            throw SchemaError(where + ": duplicate id " + std::to_string(id));
        pos[static_cast<std::size_t>(id)] = k;
    }
    return pos;
}

Problem parse(const json& doc)
{
    Problem p;
    LatticeDefinition& L = p.lattice;
    if (doc.contains("label"))
        p.label = doc["label"].is_string() ? doc["label"].get<std::string>() : throw SchemaError("label: expected a string");

    const json& meta = field(doc, "meta", "document");
    L.d = static_cast<int>(integer(field(meta, "dimension", "meta"), "meta.dimension"));
    if (L.d < 1 || L.d > 3)
        throw SchemaError("meta.dimension: must be 1, 2 or 3");
    const int d = L.d;
    if (meta.contains("box"))
        L.box = vec(meta["box"], "meta.box", d);

    const json& nodes = field(doc, "nodes", "document");
    if (!nodes.is_array() || nodes.empty())
        throw SchemaError("nodes: expected a non-empty array");
    const auto npos = dense_ids(nodes, "nodes");
    const Index n = static_cast<Index>(nodes.size());
    L.reference_coords.resize(n * d);
    for (Index j = 0; j < n; ++j) {
        const std::string where = "node " + std::to_string(j);
        L.reference_coords.segment(d * j, d) =
            vec(field(nodes[npos[static_cast<std::size_t>(j)]], "coords", where), where + ".coords", d);
    }

    const json& springs = field(doc, "springs", "document");
    if (!springs.is_array() || springs.empty())
        throw SchemaError("springs: expected a non-empty array");
    const auto spos = dense_ids(springs, "springs");
    const Index m = static_cast<Index>(springs.size());
    L.incidence = Matrix::Zero(n, m);
    L.stiffness.resize(m);
    L.lower_limits.resize(m);
    L.upper_limits.resize(m);
    bool any_shift = false;
    Eigen::MatrixXi shift = Eigen::MatrixXi::Zero(m, d);
    for (Index i = 0; i < m; ++i) {
        const json& s = springs[spos[static_cast<std::size_t>(i)]];
        const std::string where = "spring " + std::to_string(i);
        const long o = integer(field(s, "origin", where), where + ".origin");
        const long t = integer(field(s, "terminus", where), where + ".terminus");
        if (o < 0 || o >= n || t < 0 || t >= n)
            throw SchemaError(where + ": node reference does not resolve");
        if (o == t)
            throw SchemaError(where + ": origin and terminus coincide");
        L.incidence(o, i) = 1;
        L.incidence(t, i) = -1;
        L.stiffness(i) = number(field(s, "stiffness", where), where + ".stiffness");
        L.lower_limits(i) = number(field(s, "lower", where), where + ".lower");
        L.upper_limits(i) = number(field(s, "upper", where), where + ".upper");
        if (!(L.lower_limits(i) < L.upper_limits(i)))
            throw SchemaError(where + ": limits are not ordered (lower < upper)");
        if (!(L.stiffness(i) > 0))
            throw SchemaError(where + ": stiffness must be positive");
        if (s.contains("shift")) {
            const Vector sh = vec(s["shift"], where + ".shift", d);
            for (int k = 0; k < d; ++k) {
                if (sh(k) != std::round(sh(k)))
                    throw SchemaError(where + ".shift: entries must be integers");
                shift(i, k) = static_cast<int>(sh(k));
            }
            any_shift = true;
        }
    }
    if (any_shift || L.box.size() > 0) {
        if (L.box.size() == 0)
            throw SchemaError("springs: image shifts require meta.box");
        L.edge_shift = shift;
    }

    const json& cons = doc.contains("constraints") ? doc["constraints"] : json::array();
    if (!cons.is_array())
        throw SchemaError("constraints: expected an array");
    const Index q = static_cast<Index>(cons.size());
    L.constraint_matrix = Matrix::Zero(q, n * d);
    p.loads.displacement_offset.resize(q);
    for (Index r = 0; r < q; ++r) {
        const std::string where = "constraints[" + std::to_string(r) + "]";
        const json& row = cons[static_cast<std::size_t>(r)];
        const json& terms = field(row, "terms", where);
        if (!terms.is_array() || terms.empty())
            throw SchemaError(where + ".terms: expected a non-empty array");
        for (std::size_t k = 0; k < terms.size(); ++k) {
            const std::string tw = where + ".terms[" + std::to_string(k) + "]";
            const long node = integer(field(terms[k], "node", tw), tw + ".node");
            const long axis = integer(field(terms[k], "axis", tw), tw + ".axis");
            if (node < 0 || node >= n || axis < 0 || axis >= d)
                throw SchemaError(tw + ": node or axis does not resolve");
            L.constraint_matrix(r, d * node + axis) += number(field(terms[k], "coef", tw), tw + ".coef");
        }
        p.loads.displacement_offset(r) = number(field(row, "offset", where), where + ".offset");
    }

    const json& loads = field(doc, "loads", "document");
    p.loads.horizon = number(field(loads, "horizon", "loads"), "loads.horizon");
    if (loads.contains("gauge_length"))
        p.loads.gauge_length = number(loads["gauge_length"], "loads.gauge_length");
    if (loads.contains("box_axis"))
        p.loads.box_axis = static_cast<int>(integer(loads["box_axis"], "loads.box_axis"));
    if (loads.contains("segments")) {
        const json& segs = loads["segments"];
        if (!segs.is_array())
            throw SchemaError("loads.segments: expected an array");
        for (std::size_t k = 0; k < segs.size(); ++k) {
            const std::string where = "loads.segments[" + std::to_string(k) + "]";
            LoadSegment seg;
            seg.end_time = number(field(segs[k], "until", where), where + ".until");
            seg.displacement_rate = segs[k].contains("displacement_rate")
                                        ? vec(segs[k]["displacement_rate"], where + ".displacement_rate", q)
                                        : Vector(Vector::Zero(q));
            if (segs[k].contains("box_strain_rate"))
                seg.box_strain_rate = number(segs[k]["box_strain_rate"], where + ".box_strain_rate");
            p.loads.segments.push_back(std::move(seg));
        }
    }
    if (loads.contains("force")) {
        const json& fs = loads["force"];
        if (!fs.is_array())
            throw SchemaError("loads.force: expected an array");
        for (std::size_t k = 0; k < fs.size(); ++k) {
            const std::string where = "loads.force[" + std::to_string(k) + "]";
            ForcePoint fp;
            fp.time = number(field(fs[k], "time", where), where + ".time");
            fp.value = vec(field(fs[k], "values", where), where + ".values", n * d);
            p.loads.force.push_back(std::move(fp));
        }
    }
    if (doc.contains("initial_stress"))
        p.initial_stress = vec(doc["initial_stress"], "initial_stress", m);
    else
        p.initial_stress = Vector::Zero(m);

    try {
        L.validate();
        p.loads.validate(q, n * d, d);
    } catch (const Error& e) {
        throw SchemaError(e.what());
    }
    return p;
}

} // namespace

Problem read_network(std::istream& is)
{
    const std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError("line " + std::to_string(line_of(text, e.byte)) + ": malformed document (" +
                          e.what() + ")");
    }
    return parse(doc);
}

Problem load_network(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw SchemaError("cannot open network file '" + path + "'");
    return read_network(in);
}

void write_network(std::ostream& os, const Problem& p)
{
    const LatticeDefinition& L = p.lattice;
    const int d = L.d;
    json doc;
    doc["format"] = "lsm-network";
    doc["version"] = 1;
    if (!p.label.empty())
        doc["label"] = p.label;
    doc["meta"] = {{"dimension", d}};
    if (L.periodic())
        doc["meta"]["box"] = to_json(L.box);

    json nodes = json::array();
    for (Index j = 0; j < L.nodes(); ++j)
        nodes.push_back({{"id", j}, {"coords", to_json(L.reference_coords.segment(d * j, d))}});
    doc["nodes"] = nodes;

    json springs = json::array();
    for (Index i = 0; i < L.springs(); ++i) {
        json s = {{"id", i},
                  {"origin", L.origin(i)},
                  {"terminus", L.terminus(i)},
                  {"stiffness", L.stiffness(i)},
                  {"lower", L.lower_limits(i)},
                  {"upper", L.upper_limits(i)}};
        if (L.periodic()) {
            json sh = json::array();
            for (int k = 0; k < d; ++k)
                sh.push_back(L.edge_shift(i, k));
            s["shift"] = sh;
        }
        springs.push_back(s);
    }
    doc["springs"] = springs;

    json cons = json::array();
    for (Index r = 0; r < L.constraints(); ++r) {
        json terms = json::array();
        for (Index c = 0; c < L.constraint_matrix.cols(); ++c)
            if (L.constraint_matrix(r, c) != 0)
                terms.push_back({{"node", c / d}, {"axis", c % d}, {"coef", L.constraint_matrix(r, c)}});
        cons.push_back({{"terms", terms}, {"offset", p.loads.displacement_offset(r)}});
    }
    doc["constraints"] = cons;

    json loads = {{"horizon", p.loads.horizon}};
    if (p.loads.gauge_length > 0)
        loads["gauge_length"] = p.loads.gauge_length;
    loads["box_axis"] = p.loads.box_axis;
    json segs = json::array();
    for (const auto& s : p.loads.segments) {
        json js = {{"until", s.end_time}, {"displacement_rate", to_json(s.displacement_rate)}};
        if (s.box_strain_rate != 0)
            js["box_strain_rate"] = s.box_strain_rate;
        segs.push_back(js);
    }
    loads["segments"] = segs;
    if (!p.loads.force.empty()) {
        json fs = json::array();
        for (const auto& f : p.loads.force)
            fs.push_back({{"time", f.time}, {"values", to_json(f.value)}});
        loads["force"] = fs;
    }
    doc["loads"] = loads;
    if (p.initial_stress.size() > 0 && p.initial_stress.cwiseAbs().maxCoeff() != 0)
        doc["initial_stress"] = to_json(p.initial_stress);
    os << doc.dump(1) << '\n';
}

void save_network(const std::string& path, const Problem& p)
{
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write '" + path + "'");
    write_network(out, p);
}

void write_states_csv(std::ostream& os, const Trajectory& traj, const MovingSetSpec& spec)
{
    const Index m = spec.springs();
    os << "time";
    for (Index i = 0; i < m; ++i)
        os << ",y" << i;
    for (Index i = 0; i < m; ++i)
        os << ",sigma" << i;
    os << '\n';
    for (const auto& s : traj.states) {
        const Vector y = spec.to_full(s.y);
        os << format_double(s.time);
        for (Index i = 0; i < m; ++i)
            os << ',' << format_double(y(i));
        for (Index i = 0; i < m; ++i)
            os << ',' << format_double(s.sigma(i));
        os << '\n';
    }
}

} // namespace lsm
