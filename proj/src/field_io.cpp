#include "relaxlab/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace relax {

namespace {

static_assert(std::endian::native == std::endian::little,
              "relaxlab-field-v1 snapshots assume a little-endian host");

std::string strip_json_suffix(const std::string& path) {
    const std::string suffix = ".json";
    if (path.size() > suffix.size() &&
        path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0)
        return path.substr(0, path.size() - suffix.size());
    return path;
}

} // namespace

std::string write_snapshot(const std::string& dir, const FieldSnapshot& snap) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const fs::path base = fs::path(dir) / snap.name;

    const fs::path bin = base.string() + ".bin";
    std::ofstream out(bin, std::ios::binary);
    if (!out) throw NumericFailure("cannot open snapshot file " + bin.string());
    out.write(reinterpret_cast<const char*>(snap.data.data()),
              static_cast<std::streamsize>(snap.data.size() * sizeof(double)));
    if (!out) throw NumericFailure("short write to " + bin.string());
    out.close();

    nlohmann::json side;
    side["schema"] = "relaxlab-field-v1";
    side["n"] = snap.n;
    side["components"] = snap.components;
    side["time"] = snap.time;
    side["name"] = snap.name;
    const fs::path json_path = base.string() + ".json";
    std::ofstream js(json_path);
    js << side.dump(2) << "\n";
    return json_path.string();
}

FieldSnapshot read_snapshot(const std::string& sidecar_path) {
    namespace fs = std::filesystem;
    const std::string base = strip_json_suffix(sidecar_path);

    std::ifstream js(base + ".json");
    if (!js) throw IncompleteTrajectory("missing snapshot sidecar " + base + ".json");
    nlohmann::json side;
    js >> side;
    if (side.value("schema", "") != std::string("relaxlab-field-v1"))
        throw IncompleteTrajectory("unexpected snapshot schema in " + base + ".json");

    FieldSnapshot snap;
    snap.n = side.at("n").get<std::vector<int>>();
    snap.components = side.at("components").get<int>();
    snap.time = side.at("time").get<double>();
    snap.name = side.at("name").get<std::string>();

    const std::size_t count = snap.nodes() * static_cast<std::size_t>(snap.components);
    snap.data.resize(count);
    std::ifstream in(base + ".bin", std::ios::binary);
    if (!in) throw IncompleteTrajectory("missing snapshot data " + base + ".bin");
    in.read(reinterpret_cast<char*>(snap.data.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (static_cast<std::size_t>(in.gcount()) != count * sizeof(double))
        throw IncompleteTrajectory("truncated snapshot data " + base + ".bin");
    return snap;
}

FieldSnapshot to_snapshot(const ScalarField2& f, const std::string& name, double time) {
    FieldSnapshot snap;
    snap.n = {f.grid.n[0], f.grid.n[1]};
    snap.components = 1;
    snap.time = time;
    snap.name = name;
    snap.data = f.v;
    return snap;
}

FieldSnapshot to_snapshot(const VecField2& f, const std::string& name, double time) {
    FieldSnapshot snap;
    snap.n = {f.grid.n[0], f.grid.n[1]};
    snap.components = 2;
    snap.time = time;
    snap.name = name;
    snap.data.reserve(2 * f.grid.size());
    for (int a = 0; a < 2; ++a)
        snap.data.insert(snap.data.end(), f[a].v.begin(), f[a].v.end());
    return snap;
}

FieldSnapshot to_snapshot(const VecField3& f, const std::string& name, double time) {
    FieldSnapshot snap;
    snap.n = {f.grid.n[0], f.grid.n[1], f.grid.n[2]};
    snap.components = 3;
    snap.time = time;
    snap.name = name;
    snap.data.reserve(3 * f.grid.size());
    for (int a = 0; a < 3; ++a)
        snap.data.insert(snap.data.end(), f[a].v.begin(), f[a].v.end());
    return snap;
}

ScalarField2 scalar2_from_snapshot(const FieldSnapshot& snap) {
    if (snap.n.size() != 2 || snap.components != 1)
        throw IncompleteTrajectory("snapshot " + snap.name + " is not a 2D scalar field");
    ScalarField2 f(make_grid2(snap.n[0], snap.n[1]));
    f.v = snap.data;
    return f;
}

VecField2 vec2_from_snapshot(const FieldSnapshot& snap) {
    if (snap.n.size() != 2 || snap.components != 2)
        throw IncompleteTrajectory("snapshot " + snap.name + " is not a 2D vector field");
    VecField2 f(make_grid2(snap.n[0], snap.n[1]));
    const std::size_t nodes = f.grid.size();
    for (int a = 0; a < 2; ++a)
        std::memcpy(f[a].v.data(), snap.data.data() + a * nodes, nodes * sizeof(double));
    return f;
}

VecField3 vec3_from_snapshot(const FieldSnapshot& snap) {
    if (snap.n.size() != 3 || snap.components != 3)
        throw IncompleteTrajectory("snapshot " + snap.name + " is not a 3D vector field");
    VecField3 f(make_grid3(snap.n[0], snap.n[1], snap.n[2]));
    const std::size_t nodes = f.grid.size();
    for (int a = 0; a < 3; ++a)
        std::memcpy(f[a].v.data(), snap.data.data() + a * nodes, nodes * sizeof(double));
    return f;
}

} // namespace relax
