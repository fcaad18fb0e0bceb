#include "invoronoi/tessellation.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace invoronoi {

namespace {

using nlohmann::json;

void write_point(std::string& out, Point2 p)
{
    out += '[';
    out += format_real(p.x);
    out += ',';
    out += format_real(p.y);
    out += ']';
}

[[noreturn]] void fail(const std::string& field, const std::string& what)
{
    throw ParseError(field + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& where)
{
    if (!obj.is_object())
        fail(where, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end())
        fail(where, std::string("missing field '") + key + "'");
    return *it;
}

double read_real(const json& j, const std::string& where)
{
    if (!j.is_number())
        fail(where, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v))
        fail(where, "non-finite number");
    return v;
}

std::size_t read_index(const json& j, std::size_t limit, const std::string& where)
{
    if (!j.is_number_integer() || j.get<long long>() < 0)
        fail(where, "expected a non-negative integer");
    const auto v = j.get<unsigned long long>();
    if (v >= limit)
        fail(where, "index " + std::to_string(v) + " out of range (size " + std::to_string(limit) + ")");
    return static_cast<std::size_t>(v);
}

Point2 read_point(const json& j, const std::string& where)
{
    if (!j.is_array() || j.size() != 2)
        fail(where, "expected [x, y]");
    return {read_real(j[0], where + "[0]"), read_real(j[1], where + "[1]")};
}

std::vector<Point2> read_points(const json& j, const std::string& where)
{
    if (!j.is_array())
        fail(where, "expected an array");
    std::vector<Point2> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(read_point(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

} // namespace

UnsupportedVersionError::UnsupportedVersionError(long version)
    : std::runtime_error("unsupported tessellation format version " + std::to_string(version) + " (expected " +
                         std::to_string(kFormatVersion) + ")"),
      version_(version)
{}

std::string format_real(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string to_json(const Tessellation& t, const GroundTruth* truth)
{
    std::string out;
    out.reserve(128 * (t.vertices.size() + t.ridges.size()));
    out += "{\n  \"version\": " + std::to_string(kFormatVersion) + ",\n  \"vertices\": [";
    for (std::size_t i = 0; i < t.vertices.size(); ++i) {
        out += i ? ",\n    " : "\n    ";
        write_point(out, t.vertices[i]);
    }
    out += "\n  ],\n  \"ridges\": [";
    for (std::size_t i = 0; i < t.ridges.size(); ++i) {
        const Ridge& r = t.ridges[i];
        out += i ? ",\n    " : "\n    ";
        out += "{\"cells\": [" + std::to_string(r.cells[0]) + "," + std::to_string(r.cells[1]) + "], ";
        if (const auto* f = std::get_if<FiniteRidge>(&r.geometry)) {
            out += "\"finite\": [" + std::to_string(f->v0) + "," + std::to_string(f->v1) + "]}";
        } else {
            const auto& ray = std::get<RayRidge>(r.geometry);
            out += "\"ray\": {\"v\": " + std::to_string(ray.v0) + ", \"dir\": ";
            write_point(out, ray.dir.vec());
            out += "}}";
        }
    }
    out += "\n  ],\n  \"cells\": [";
    for (std::size_t i = 0; i < t.cells.size(); ++i) {
        const Cell& c = t.cells[i];
        out += i ? ",\n    " : "\n    ";
        out += "{\"ridges\": [";
        for (std::size_t j = 0; j < c.ridges.size(); ++j) {
            if (j)
                out += ',';
            out += std::to_string(c.ridges[j]);
        }
        out += "], \"bounded\": ";
        out += c.bounded ? "true}" : "false}";
    }
    out += "\n  ]";
    if (truth) {
        out += ",\n  \"generators\": [";
        for (std::size_t i = 0; i < truth->generators.size(); ++i) {
            out += i ? ",\n    " : "\n    ";
            write_point(out, truth->generators[i]);
        }
        out += "\n  ]";
    }
    out += "\n}\n";
    return out;
}

TessellationFile from_json(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed tessellation file: ") + e.what());
    }
    const json& version = require(doc, "version", "document");
    if (!version.is_number_integer())
        fail("version", "expected an integer");
    if (version.get<long>() != kFormatVersion)
        throw UnsupportedVersionError(version.get<long>());

    TessellationFile file;
    Tessellation& t = file.tessellation;
    t.vertices = read_points(require(doc, "vertices", "document"), "vertices");

    const json& cells = require(doc, "cells", "document");
    if (!cells.is_array())
        fail("cells", "expected an array");
    const std::size_t nc = cells.size();

    const json& ridges = require(doc, "ridges", "document");
    if (!ridges.is_array())
        fail("ridges", "expected an array");
    t.ridges.reserve(ridges.size());
    for (std::size_t i = 0; i < ridges.size(); ++i) {
        const std::string where = "ridges[" + std::to_string(i) + "]";
        const json& rj = ridges[i];
        const json& cj = require(rj, "cells", where);
        if (!cj.is_array() || cj.size() != 2)
            fail(where + ".cells", "expected [i, j]");
        const std::array<CellId, 2> pair{read_index(cj[0], nc, where + ".cells[0]"),
                                         read_index(cj[1], nc, where + ".cells[1]")};
        const bool has_finite = rj.contains("finite");
        const bool has_ray = rj.contains("ray");
        if (has_finite == has_ray)
            fail(where, "expected exactly one of 'finite' or 'ray'");
        if (has_finite) {
            const json& fj = rj["finite"];
            if (!fj.is_array() || fj.size() != 2)
                fail(where + ".finite", "expected [v0, v1]");
            t.ridges.push_back({pair, FiniteRidge{read_index(fj[0], t.vertices.size(), where + ".finite[0]"),
                                                  read_index(fj[1], t.vertices.size(), where + ".finite[1]")}});
        } else {
            const json& ray = rj["ray"];
            const VertexId v = read_index(require(ray, "v", where + ".ray"), t.vertices.size(), where + ".ray.v");
            const Point2 d = read_point(require(ray, "dir", where + ".ray"), where + ".ray.dir");
            try {
                t.ridges.push_back({pair, RayRidge{v, UnitVec2::checked(d.x, d.y)}});
            } catch (const std::invalid_argument&) {
                fail(where + ".ray.dir", "direction is not unit length");
            }
        }
    }

    t.cells.reserve(nc);
    for (std::size_t i = 0; i < nc; ++i) {
        const std::string where = "cells[" + std::to_string(i) + "]";
        const json& rs = require(cells[i], "ridges", where);
        const json& bounded = require(cells[i], "bounded", where);
        if (!rs.is_array())
            fail(where + ".ridges", "expected an array");
        if (!bounded.is_boolean())
            fail(where + ".bounded", "expected a boolean");
        Cell cell;
        cell.bounded = bounded.get<bool>();
        for (std::size_t j = 0; j < rs.size(); ++j)
            cell.ridges.push_back(read_index(rs[j], t.ridges.size(), where + ".ridges[" + std::to_string(j) + "]"));
        t.cells.push_back(std::move(cell));
    }

    if (doc.contains("generators")) {
        GroundTruth gt{read_points(doc["generators"], "generators")};
        if (gt.generators.size() != nc)
            fail("generators", "expected one generator per cell (" + std::to_string(nc) + "), got " +
                                   std::to_string(gt.generators.size()));
        file.truth = std::move(gt);
    }
    return file;
}

TessellationFile load(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return from_json(buf.str());
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void save(const Tessellation& t, const GroundTruth* truth, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot write " + path.string());
    out << to_json(t, truth);
    if (!out)
        throw IoError("write failed for " + path.string());
}

} // namespace invoronoi
