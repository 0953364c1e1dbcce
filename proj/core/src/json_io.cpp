#include "lftid/json_io.hpp"

#include <fstream>

#include "json.hpp"

namespace lftid {

namespace {

using nlohmann::json;

json read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

const json& field(const json& j, const std::string& name, const std::string& path) {
    auto it = j.find(name);
    if (it == j.end()) throw ParseError(path + ": missing \"" + name + "\"");
    return *it;
}

Mat parse_matrix(const json& j, const std::string& name) {
    if (!j.is_array()) throw DimensionMismatch(name + ": expected an array of rows");
    const auto rows = static_cast<Index>(j.size());
    if (rows == 0) return Mat(0, 0);
    if (!j[0].is_array()) throw DimensionMismatch(name + ": expected an array of rows");
    const auto cols = static_cast<Index>(j[0].size());
    Mat m(rows, cols);
    for (Index r = 0; r < rows; ++r) {
        const json& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Index>(row.size()) != cols)
            throw DimensionMismatch(name + ": row " + std::to_string(r) +
                                    " has inconsistent length");
        for (Index c = 0; c < cols; ++c) {
            const json& entry = row[static_cast<std::size_t>(c)];
            if (!entry.is_number())
                throw DimensionMismatch(name + ": entry (" + std::to_string(r) + "," +
                                        std::to_string(c) + ") is not a number");
            m(r, c) = entry.get<double>();
        }
    }
    return m;
}

Vec parse_vector(const json& j, const std::string& name) {
    if (!j.is_array()) throw DimensionMismatch(name + ": expected an array of numbers");
    Vec v(static_cast<Index>(j.size()));
    for (Index i = 0; i < v.size(); ++i) {
        const json& entry = j[static_cast<std::size_t>(i)];
        if (!entry.is_number())
            throw DimensionMismatch(name + ": entry " + std::to_string(i) +
                                    " is not a number");
        v(i) = entry.get<double>();
    }
    return v;
}

json dump_matrix(const Mat& m) {
    json rows = json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

json dump_vector(const Vec& v) {
    json out = json::array();
    for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

void write_file(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    out << j.dump(2) << "\n";
}

}  // namespace

LftPlant load_plant(const std::string& path) {
    const json j = read_file(path);
    LftPlant pl;
    pl.a_xx = parse_matrix(field(j, "A_xx", path), "A_xx");
    pl.b_xu = parse_matrix(field(j, "B_xu", path), "B_xu");
    pl.b_xv = parse_matrix(field(j, "B_xv", path), "B_xv");
    pl.c_yx = parse_matrix(field(j, "C_yx", path), "C_yx");
    pl.c_zx = parse_matrix(field(j, "C_zx", path), "C_zx");
    pl.d_zu = parse_matrix(field(j, "D_zu", path), "D_zu");
    pl.d_zv = parse_matrix(field(j, "D_zv", path), "D_zv");
    pl.d_yu = parse_matrix(field(j, "D_yu", path), "D_yu");
    pl.d_yv = parse_matrix(field(j, "D_yv", path), "D_yv");

    const json& p_list = field(j, "P", path);
    if (!p_list.is_array() || p_list.size() < 2)
        throw ParseError(path + ": \"P\" must list P_0 and at least one parameter matrix");
    pl.p0 = parse_matrix(p_list[0], "P[0]");
    for (std::size_t i = 1; i < p_list.size(); ++i)
        pl.p_basis.push_back(parse_matrix(p_list[i], "P[" + std::to_string(i) + "]"));

    const json& box = field(j, "theta_box", path);
    pl.theta_box.lower = parse_vector(field(box, "lower", path), "theta_box.lower");
    pl.theta_box.upper = parse_vector(field(box, "upper", path), "theta_box.upper");
    pl.validate();
    return pl;
}

InterpSpec load_interp_spec(const std::string& path) {
    const json j = read_file(path);
    InterpSpec spec;
    spec.xi = parse_matrix(field(j, "Xi", path), "Xi");
    spec.pi = parse_matrix(field(j, "Pi", path), "Pi");
    if (spec.xi.rows() != spec.xi.cols() || spec.xi.rows() == 0)
        throw DimensionMismatch("Xi: must be square and nonempty");
    if (spec.pi.cols() != spec.xi.rows())
        throw DimensionMismatch("Pi: column count must equal m_xi");
    return spec;
}

void save_plant(const LftPlant& plant, const std::string& path) {
    json j;
    j["A_xx"] = dump_matrix(plant.a_xx);
    j["B_xu"] = dump_matrix(plant.b_xu);
    j["B_xv"] = dump_matrix(plant.b_xv);
    j["C_yx"] = dump_matrix(plant.c_yx);
    j["C_zx"] = dump_matrix(plant.c_zx);
    j["D_zu"] = dump_matrix(plant.d_zu);
    j["D_zv"] = dump_matrix(plant.d_zv);
    j["D_yu"] = dump_matrix(plant.d_yu);
    j["D_yv"] = dump_matrix(plant.d_yv);
    json p_list = json::array();
    p_list.push_back(dump_matrix(plant.p0));
    for (const Mat& p : plant.p_basis) p_list.push_back(dump_matrix(p));
    j["P"] = std::move(p_list);
    j["theta_box"] = {{"lower", dump_vector(plant.theta_box.lower)},
                      {"upper", dump_vector(plant.theta_box.upper)}};
    write_file(j, path);
}

void save_interp_spec(const InterpSpec& spec, const std::string& path) {
    json j;
    j["Xi"] = dump_matrix(spec.xi);
    j["Pi"] = dump_matrix(spec.pi);
    write_file(j, path);
}

}  // namespace lftid
