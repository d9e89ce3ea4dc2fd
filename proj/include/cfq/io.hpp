#pragma once

// JSON operator format and CSV export.
//
//   Operator   {"dim": n, "re": [[...], ...], "im": [[...], ...]}   (row-major)
//   Trajectory CSV header t,<observable>...
//   Q grid     CSV header re_alpha,im_alpha,q

#include "cfq/functionals.hpp"
#include "cfq/gaussian.hpp"
#include "cfq/integrate.hpp"
#include "cfq/operator.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace cfq::io {

using Json = nlohmann::json;

/// Malformed input; `path()` names the offending field, e.g. "params.kappa".
class SchemaError : public Error {
public:
    SchemaError(std::string path, const std::string& what)
        : Error(path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// Round-trippable decimal form (17 significant digits).
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline Json to_json(const CMatrix& m) {
    Json re = Json::array();
    Json im = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json rr = Json::array();
        Json ir = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            rr.push_back(m(r, c).real());
            ir.push_back(m(r, c).imag());
        }
        re.push_back(std::move(rr));
        im.push_back(std::move(ir));
    }
    return Json{{"dim", m.rows()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

inline Json to_json(const Operator& op) { return to_json(op.matrix()); }
inline Json to_json(const DensityMatrix& rho) { return to_json(rho.matrix()); }

inline CMatrix matrix_from_json(const Json& j, const std::string& path) {
    if (!j.is_object()) throw SchemaError(path, "operator must be an object with dim, re, im");
    if (!j.contains("dim") || !j["dim"].is_number_integer())
        throw SchemaError(path + ".dim", "missing or not an integer");
    const auto dim = j["dim"].get<long long>();
    if (dim < 1) throw SchemaError(path + ".dim", "must be >= 1");
    CMatrix m = CMatrix::Zero(dim, dim);
    for (const char* part : {"re", "im"}) {
        const std::string ppath = path + "." + part;
        if (!j.contains(part)) {
            if (std::string(part) == "im") continue;  // purely real operators may omit im
            throw SchemaError(ppath, "missing");
        }
        const Json& rows = j[part];
        if (!rows.is_array() || static_cast<long long>(rows.size()) != dim)
            throw SchemaError(ppath, "must be an array of " + std::to_string(dim) + " rows");
        for (long long r = 0; r < dim; ++r) {
            const Json& row = rows[static_cast<std::size_t>(r)];
            const std::string rpath = ppath + "[" + std::to_string(r) + "]";
            if (!row.is_array() || static_cast<long long>(row.size()) != dim)
                throw SchemaError(rpath, "must hold " + std::to_string(dim) + " numbers");
            for (long long c = 0; c < dim; ++c) {
                const Json& v = row[static_cast<std::size_t>(c)];
                if (!v.is_number()) throw SchemaError(rpath + "[" + std::to_string(c) + "]", "not a number");
                if (part[0] == 'r')
                    m(r, c).real(v.get<double>());
                else
                    m(r, c).imag(v.get<double>());
            }
        }
    }
    return m;
}

inline Operator operator_from_json(const Json& j, const std::string& path = "operator") {
    return Operator(matrix_from_json(j, path));
}

inline Json read_json_file(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw SchemaError(file, "cannot open file");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw SchemaError(file, std::string("invalid JSON: ") + e.what());
    }
}

inline void write_text(const std::string& file, const std::string& text) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw Error("cannot write " + file);
    out << text;
}

inline void write_json(const std::string& file, const Json& j) { write_text(file, j.dump(2) + "\n"); }

/// Comma-separated table with a header row.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void add_row(const std::vector<double>& row) {
        if (row.size() != header_.size()) throw InvalidArgument("CsvTable: row width differs from header");
        rows_.push_back(row);
    }

    std::size_t rows() const noexcept { return rows_.size(); }

    std::string str() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < header_.size(); ++i) os << (i ? "," : "") << header_[i];
        os << '\n';
        for (const auto& row : rows_) {
            for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_double(row[i]);
            os << '\n';
        }
        return os.str();
    }

    void write(const std::string& file) const { write_text(file, str()); }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<double>> rows_;
};

/// t,<observable>... with one row per stored state.
inline CsvTable trajectory_table(const Trajectory& traj) {
    std::vector<std::string> header{"t"};
    for (const auto& [name, _] : traj.observables) header.push_back(name);
    CsvTable table(std::move(header));
    for (std::size_t i = 0; i < traj.size(); ++i) {
        std::vector<double> row{traj.times[i]};
        for (const auto& [_, values] : traj.observables) row.push_back(values[i]);
        table.add_row(row);
    }
    return table;
}

inline CsvTable q_function_table(const QFunction& q) {
    CsvTable table({"re_alpha", "im_alpha", "q"});
    for (std::size_t i = 0; i < q.grid.n_re; ++i)
        for (std::size_t j = 0; j < q.grid.n_im; ++j)
            table.add_row({q.grid.re_at(i), q.grid.im_at(j),
                           q.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))});
    return table;
}

/// t,Vqq,Vpp,Vqp,dB
inline CsvTable covariance_table(const std::vector<double>& times, const std::vector<GaussianState>& states) {
    CsvTable table({"t", "Vqq", "Vpp", "Vqp", "dB"});
    for (std::size_t i = 0; i < times.size(); ++i) {
        const Mat2& v = states[i].cov;
        table.add_row({times[i], v(0, 0), v(1, 1), v(0, 1), squeezing_db(v)});
    }
    return table;
}

}  // namespace cfq::io
