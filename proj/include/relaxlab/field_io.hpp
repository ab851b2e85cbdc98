#ifndef RELAXLAB_FIELD_IO_HPP
#define RELAXLAB_FIELD_IO_HPP

#include <string>
#include <vector>

#include "relaxlab/field.hpp"

namespace relax {

// relaxlab-field-v1 snapshot: raw little-endian float64 samples, row-major,
// components concatenated, plus a JSON sidecar describing the layout.
struct FieldSnapshot {
    std::vector<int> n;           // grid sizes per axis (2 or 3 entries)
    int components = 1;           // scalar fields per sample set
    double time = 0.0;
    std::string name;
    std::vector<double> data;     // components * prod(n) values

    std::size_t nodes() const {
        std::size_t s = 1;
        for (int d : n) s *= static_cast<std::size_t>(d);
        return s;
    }
};

// Writes <dir>/<name>.bin and <dir>/<name>.json; returns the sidecar path.
std::string write_snapshot(const std::string& dir, const FieldSnapshot& snap);

// Accepts the sidecar path (or a path without the .json suffix).
FieldSnapshot read_snapshot(const std::string& sidecar_path);

FieldSnapshot to_snapshot(const ScalarField2& f, const std::string& name, double time);
FieldSnapshot to_snapshot(const VecField2& f, const std::string& name, double time);
FieldSnapshot to_snapshot(const VecField3& f, const std::string& name, double time);

ScalarField2 scalar2_from_snapshot(const FieldSnapshot& snap);
VecField2 vec2_from_snapshot(const FieldSnapshot& snap);
VecField3 vec3_from_snapshot(const FieldSnapshot& snap);

} // namespace relax

#endif
