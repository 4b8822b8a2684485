#include "ckff/spec_io.hpp"

#include <fstream>
#include <sstream>

namespace ckff {

namespace {

[[noreturn]] void bad_input(const std::string& what) { throw Error(ErrorKind::InvalidInput, what); }

Complex complex_from_json(const Json& j)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        bad_input("complex numbers must be [re, im] pairs");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

const Json& field(const Json& j, const char* name)
{
    const auto it = j.find(name);
    if (it == j.end()) {
        bad_input(std::string("missing field '") + name + "'");
    }
    return *it;
}

}  // namespace

Json matrix_to_json(const Matrix& m)
{
    Json rows = Json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Index c = 0; c < m.cols(); ++c) {
            row.push_back({m(r, c).real(), m(r, c).imag()});
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const Json& j, Index rows, Index cols)
{
    if (!j.is_array() || static_cast<Index>(j.size()) != rows) {
        bad_input("matrix must have " + std::to_string(rows) + " rows");
    }
    Matrix m(rows, cols);
    for (Index r = 0; r < rows; ++r) {
        const Json& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
            bad_input("matrix row " + std::to_string(r) + " must have " + std::to_string(cols) + " entries");
        }
        for (Index c = 0; c < cols; ++c) {
            m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
        }
    }
    return m;
}

Json spec_to_json(const ControlledFrameSpec& spec, const Metadata& metadata)
{
    Json subspaces = Json::array();
    Json weights = Json::array();
    for (const auto& item : spec.system().items()) {
        subspaces.push_back({{"basis", matrix_to_json(item.subspace.basis())}});
        weights.push_back(item.weight);
    }
    return Json{
        {"schema_version", kSchemaVersion},
        {"dim", spec.dim()},
        {"field", "complex"},
        {"subspaces", std::move(subspaces)},
        {"weights", std::move(weights)},
        {"C", matrix_to_json(spec.C().matrix())},
        {"Cp", matrix_to_json(spec.Cp().matrix())},
        {"K", matrix_to_json(spec.K().matrix())},
        {"metadata", metadata},
    };
}

SpecDocument spec_from_json(const Json& j, const Tolerance& tol)
{
    if (!j.is_object()) {
        bad_input("spec document must be a JSON object");
    }
    const Json& version = field(j, "schema_version");
    if (!version.is_number_integer() || version.get<int>() != kSchemaVersion) {
        bad_input("unsupported schema_version (expected 1)");
    }
    if (field(j, "field") != "complex") {
        bad_input("field must be \"complex\"");
    }
    const Json& dim_json = field(j, "dim");
    if (!dim_json.is_number_integer() || dim_json.get<long long>() < 1) {
        bad_input("dim must be a positive integer");
    }
    const auto n = static_cast<Index>(dim_json.get<long long>());

    const Json& subspaces = field(j, "subspaces");
    const Json& weights = field(j, "weights");
    if (!subspaces.is_array() || !weights.is_array() || subspaces.size() != weights.size()) {
        bad_input("subspaces and weights must be arrays of equal length");
    }
    Metadata metadata;
    if (const auto it = j.find("metadata"); it != j.end()) {
        if (!it->is_object()) {
            bad_input("metadata must be an object of strings");
        }
        for (const auto& [key, value] : it->items()) {
            if (!value.is_string()) {
                bad_input("metadata value for '" + key + "' is not a string");
            }
            metadata[key] = value.get<std::string>();
        }
    }

    try {
        std::vector<FusionItem> items;
        for (std::size_t i = 0; i < subspaces.size(); ++i) {
            const Json& basis = field(subspaces[i], "basis");
            if (!basis.is_array() || basis.empty() || !basis[0].is_array()) {
                bad_input("subspace basis must be an array of rows");
            }
            const auto k = static_cast<Index>(basis[0].size());
            if (!weights[i].is_number()) {
                bad_input("weights must be numbers");
            }
            items.push_back({Subspace(matrix_from_json(basis, n, k), tol), weights[i].get<double>()});
        }
        ControlledFrameSpec spec(FusionSystem(n, std::move(items)), Operator(matrix_from_json(field(j, "C"), n, n)),
                                 Operator(matrix_from_json(field(j, "Cp"), n, n)),
                                 Operator(matrix_from_json(field(j, "K"), n, n)), tol);
        return {std::move(spec), std::move(metadata)};
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::InvalidInput) {
            throw;
        }
        throw Error(ErrorKind::InvalidInput, std::string("invalid spec: ") + e.what());
    }
}

std::string serialize(const ControlledFrameSpec& spec, const Metadata& metadata)
{
    return spec_to_json(spec, metadata).dump(2) + "\n";
}

SpecDocument parse_spec(std::string_view text, const Tolerance& tol)
{
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::exception& e) {
        bad_input(std::string("malformed JSON: ") + e.what());
    }
    return spec_from_json(j, tol);
}

Json read_json_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        bad_input("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return Json::parse(buf.str());
    } catch (const Json::exception& e) {
        bad_input(path.string() + ": malformed JSON: " + e.what());
    }
}

SpecDocument read_spec_file(const std::filesystem::path& path, const Tolerance& tol)
{
    return spec_from_json(read_json_file(path), tol);
}

void write_text_file(const std::filesystem::path& path, std::string_view text)
{
    std::ofstream out(path);
    if (!out || !(out << text)) {
        throw Error(ErrorKind::InvalidInput, "cannot write " + path.string());
    }
}

}  // namespace ckff
