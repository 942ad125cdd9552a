#include "gramkit/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace gramkit {

namespace {

double number(const Json& j, const char* what) {
    if (!j.is_number()) throw InvalidInput(std::string(what) + ": expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw InvalidInput(std::string(what) + ": non-finite entry");
    return v;
}

Index positive_size(const Json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number_integer())
        throw InvalidInput(std::string("missing or non-integer \"") + key + "\"");
    const auto v = j[key].get<long long>();
    if (v <= 0) throw InvalidInput(std::string("\"") + key + "\" must be positive");
    return static_cast<Index>(v);
}

Complex complex_from_json(const Json& j, const char* what) {
    if (!j.is_array() || j.size() != 2)
        throw InvalidInput(std::string(what) + ": expected [re, im]");
    return {number(j[0], what), number(j[1], what)};
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

double parse_double(std::string_view s, const std::string& cell) {
    double v = 0.0;
    const char* first = s.data();
    if (!s.empty() && s.front() == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
        throw InvalidInput("csv: cannot parse cell \"" + cell + "\"");
    return v;
}

Complex parse_cell(std::string cell) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    if (b == std::string::npos) throw InvalidInput("csv: empty cell");
    cell = cell.substr(b, e - b + 1);
    if (cell.back() != 'i') throw InvalidInput("csv: cell \"" + cell + "\" is not of the form re+imi");
    std::size_t split = std::string::npos;
    for (std::size_t k = 1; k + 1 < cell.size(); ++k)
        if ((cell[k] == '+' || cell[k] == '-') && cell[k - 1] != 'e' && cell[k - 1] != 'E') split = k;
    if (split == std::string::npos)
        throw InvalidInput("csv: cell \"" + cell + "\" is not of the form re+imi");
    const std::string_view view(cell);
    return {parse_double(view.substr(0, split), cell),
            parse_double(view.substr(split, cell.size() - 1 - split), cell)};
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

Json matrix_to_json(const LinearMap& m) {
    Json data = Json::array();
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) data.push_back(complex_to_json(m(i, j)));
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

LinearMap matrix_from_json(const Json& j) {
    if (!j.is_object()) throw InvalidInput("matrix: expected a JSON object");
    const Index rows = positive_size(j, "rows");
    const Index cols = positive_size(j, "cols");
    if (!j.contains("data") || !j["data"].is_array())
        throw InvalidInput("matrix: missing \"data\" array");
    const Json& data = j["data"];
    if (static_cast<Index>(data.size()) != rows * cols)
        throw InvalidInput("matrix: data has " + std::to_string(data.size()) + " entries, expected " +
                           std::to_string(rows * cols));
    LinearMap m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index k = 0; k < cols; ++k) m(i, k) = complex_from_json(data[i * cols + k], "matrix entry");
    return m;
}

Json frame_to_json(const FrameSystem& f) {
    Json vectors = Json::array();
    for (Index j = 0; j < f.count(); ++j) {
        Json v = Json::array();
        for (Index i = 0; i < f.dim(); ++i) v.push_back(complex_to_json(f.synthesis()(i, j)));
        vectors.push_back(std::move(v));
    }
    return Json{{"dim", f.dim()}, {"vectors", std::move(vectors)}};
}

FrameSystem frame_from_json(const Json& j) {
    if (!j.is_object()) throw InvalidInput("frame: expected a JSON object");
    const Index dim = positive_size(j, "dim");
    if (!j.contains("vectors") || !j["vectors"].is_array())
        throw InvalidInput("frame: missing \"vectors\" array");
    const Json& vectors = j["vectors"];
    LinearMap t(dim, static_cast<Index>(vectors.size()));
    for (Index k = 0; k < t.cols(); ++k) {
        const Json& v = vectors[k];
        if (!v.is_array() || static_cast<Index>(v.size()) != dim)
            throw InvalidInput("frame: vector " + std::to_string(k) + " does not have dimension " +
                               std::to_string(dim));
        for (Index i = 0; i < dim; ++i) t(i, k) = complex_from_json(v[i], "frame entry");
    }
    return FrameSystem(std::move(t));
}

std::string matrix_to_csv(const LinearMap& m) {
    std::string out;
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            if (j) out += ',';
            const Complex z = m(i, j);
            out += format_double(z.real());
            if (std::signbit(z.imag()))
                out += '-' + format_double(-z.imag());
            else
                out += '+' + format_double(z.imag());
            out += 'i';
        }
        out += '\n';
    }
    return out;
}

LinearMap matrix_from_csv(const std::string& text) {
    std::vector<std::vector<Complex>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<Complex> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) row.push_back(parse_cell(cell));
        if (!rows.empty() && row.size() != rows.front().size())
            throw InvalidInput("csv: ragged rows");
        rows.push_back(std::move(row));
    }
    if (rows.empty() || rows.front().empty()) throw InvalidInput("csv: empty matrix");
    LinearMap m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
    return m;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot write " + path);
    out << text;
}

static Json parse_json(const std::string& path) {
    try {
        return Json::parse(read_text(path));
    } catch (const Json::parse_error& e) {
        throw InvalidInput(path + ": " + e.what());
    }
}

LinearMap read_matrix(const std::string& path) {
    if (ends_with(path, ".csv")) return matrix_from_csv(read_text(path));
    try {
        return matrix_from_json(parse_json(path));
    } catch (const Json::exception& e) {
        throw InvalidInput(path + ": " + e.what());
    }
}

void write_matrix(const std::string& path, const LinearMap& m) {
    write_text(path, ends_with(path, ".csv") ? matrix_to_csv(m) : matrix_to_json(m).dump(2) + "\n");
}

FrameSystem read_frame(const std::string& path) {
    try {
        return frame_from_json(parse_json(path));
    } catch (const Json::exception& e) {
        throw InvalidInput(path + ": " + e.what());
    }
}

void write_frame(const std::string& path, const FrameSystem& f) {
    write_text(path, frame_to_json(f).dump(2) + "\n");
}

Json certificate_to_json(const Certificate& c) {
    auto num = [](double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); };
    Json checks = Json::array();
    for (const auto& k : c.checks)
        checks.push_back({{"name", k.name},
                          {"lhs", num(k.lhs)},
                          {"relation", std::string(to_string(k.relation))},
                          {"rhs", num(k.rhs)},
                          {"holds", k.holds}});
    Json values = Json::object();
    for (const auto& [k, v] : c.values) values[k] = num(v);
    Json out{{"name", c.name},
             {"verdict", std::string(to_string(c.verdict))},
             {"checks", std::move(checks)},
             {"values", std::move(values)},
             {"conclusions", c.conclusions}};
    if (!c.note.empty()) out["note"] = c.note;
    return out;
}

}  // namespace gramkit
