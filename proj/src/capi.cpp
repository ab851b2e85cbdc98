#include "relaxlab/relaxlab.h"

#include <cstring>
#include <fstream>
#include <string>

#include <json.hpp>

#include "relaxlab/runner.hpp"

using nlohmann::json;

struct rlx_config {
    json j;
    mutable std::string scratch;
};

struct rlx_field {
    relax::FieldSnapshot snap;
};

namespace {

thread_local std::string g_last_error;

rlx_status fail(rlx_status st, const std::string& msg) {
    g_last_error = msg;
    return st;
}

template <class F>
rlx_status guarded(const F& fn) {
    try {
        return fn();
    } catch (const relax::ConfigError& e) {
        return fail(RLX_ERR_CONFIG, e.what());
    } catch (const relax::CertificateFailure& e) {
        return fail(RLX_ERR_CERTIFICATE, e.what());
    } catch (const relax::IncompleteTrajectory& e) {
        return fail(RLX_ERR_IO, e.what());
    } catch (const relax::NumericFailure& e) {
        return fail(RLX_ERR_NUMERIC, e.what());
    } catch (const std::exception& e) {
        return fail(RLX_ERR_INTERNAL, e.what());
    }
}

relax::VecField2 vec2_of(const rlx_field* f) {
    if (f->snap.n.size() != 2 || f->snap.components != 2)
        throw relax::ConfigError("field is not a 2-component 2D field");
    return relax::vec2_from_snapshot(f->snap);
}

} // namespace

extern "C" {

const char* rlx_version(void) { return relax::relaxlab_version(); }

const char* rlx_last_error(void) { return g_last_error.c_str(); }

rlx_status rlx_config_default(const char* experiment, rlx_config** out) {
    if (!experiment || !out) return fail(RLX_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        auto cfg = new rlx_config{json::parse(relax::default_config_text(experiment)), {}};
        *out = cfg;
        return RLX_OK;
    });
}

rlx_status rlx_config_load(const char* path, rlx_config** out) {
    if (!path || !out) return fail(RLX_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&]() -> rlx_status {
        std::ifstream in(path);
        if (!in) return fail(RLX_ERR_CONFIG, std::string("cannot open config file ") + path);
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            return fail(RLX_ERR_CONFIG, std::string("invalid JSON: ") + e.what());
        }
        *out = new rlx_config{std::move(j), {}};
        return RLX_OK;
    });
}

rlx_status rlx_config_parse(const char* json_text, rlx_config** out) {
    if (!json_text || !out) return fail(RLX_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&]() -> rlx_status {
        try {
            json j = json::parse(json_text);
            *out = new rlx_config{std::move(j), {}};
        } catch (const json::exception& e) {
            return fail(RLX_ERR_CONFIG, std::string("invalid JSON: ") + e.what());
        }
        return RLX_OK;
    });
}

rlx_status rlx_config_set(rlx_config* cfg, const char* dotted_key, const char* json_value) {
    if (!cfg || !dotted_key || !json_value)
        return fail(RLX_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&]() -> rlx_status {
        std::string pointer = "/";
        for (const char* p = dotted_key; *p; ++p) pointer += *p == '.' ? '/' : *p;
        json value;
        try {
            value = json::parse(json_value);
        } catch (const json::exception&) {
            value = std::string(json_value);  // convenience: bare strings
        }
        cfg->j[json::json_pointer(pointer)] = value;
        return RLX_OK;
    });
}

const char* rlx_config_experiment(const rlx_config* cfg) {
    if (!cfg) return "";
    cfg->scratch = cfg->j.value("experiment", "");
    return cfg->scratch.c_str();
}

rlx_status rlx_config_dump(const rlx_config* cfg, char* buf, size_t bufsize, size_t* needed) {
    if (!cfg || !needed) return fail(RLX_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const std::string text = cfg->j.dump(2);
        *needed = text.size() + 1;
        if (buf && bufsize >= text.size() + 1) std::memcpy(buf, text.c_str(), text.size() + 1);
        return RLX_OK;
    });
}

void rlx_config_free(rlx_config* cfg) { delete cfg; }

rlx_status rlx_execute(const rlx_config* cfg) {
    if (!cfg) return fail(RLX_ERR_INVALID_ARGUMENT, "null config");
    return guarded([&]() -> rlx_status {
        const relax::RunConfig rc = relax::parse_config_text(cfg->j.dump());
        const int code = relax::execute(rc);
        switch (code) {
            case 0: return RLX_OK;
            case 1: return fail(RLX_ERR_CONFIG, "configuration rejected; see manifest");
            case 3: return fail(RLX_ERR_CERTIFICATE, "certification failed; see manifest");
            default: return fail(RLX_ERR_NUMERIC, "numeric failure; see manifest");
        }
    });
}

rlx_status rlx_field_load(const char* sidecar_path, rlx_field** out) {
    if (!sidecar_path || !out) return fail(RLX_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        auto f = new rlx_field{relax::read_snapshot(sidecar_path)};
        *out = f;
        return RLX_OK;
    });
}

rlx_status rlx_field_create2d(int n1, int n2, int components, const double* data,
                              rlx_field** out) {
    if (!data || !out) return fail(RLX_ERR_INVALID_ARGUMENT, "null argument");
    if (components < 1 || components > 3)
        return fail(RLX_ERR_INVALID_ARGUMENT, "components must be 1..3");
    return guarded([&] {
        relax::FieldSnapshot snap;
        snap.n = {n1, n2};
        snap.components = components;
        snap.name = "field";
        const std::size_t count =
            static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2) * components;
        snap.data.assign(data, data + count);
        // grid constraints checked through the Grid constructor
        relax::make_grid2(n1, n2);
        *out = new rlx_field{std::move(snap)};
        return RLX_OK;
    });
}

void rlx_field_free(rlx_field* f) { delete f; }

rlx_status rlx_field_info(const rlx_field* f, int* rank, int n[3], int* components,
                          double* time) {
    if (!f) return fail(RLX_ERR_INVALID_ARGUMENT, "null field");
    if (rank) *rank = static_cast<int>(f->snap.n.size());
    if (n) {
        n[0] = n[1] = n[2] = 0;
        for (std::size_t i = 0; i < f->snap.n.size() && i < 3; ++i) n[i] = f->snap.n[i];
    }
    if (components) *components = f->snap.components;
    if (time) *time = f->snap.time;
    return RLX_OK;
}

rlx_status rlx_field_data(const rlx_field* f, double* buf, size_t count) {
    if (!f || !buf) return fail(RLX_ERR_INVALID_ARGUMENT, "null argument");
    if (count < f->snap.data.size())
        return fail(RLX_ERR_INVALID_ARGUMENT, "buffer too small for field data");
    std::memcpy(buf, f->snap.data.data(), f->snap.data.size() * sizeof(double));
    return RLX_OK;
}

rlx_status rlx_field_save(const rlx_field* f, const char* dir, const char* name) {
    if (!f || !dir || !name) return fail(RLX_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        relax::FieldSnapshot snap = f->snap;
        snap.name = name;
        relax::write_snapshot(dir, snap);
        return RLX_OK;
    });
}

rlx_status rlx_field_magnetic_energy(const rlx_field* f, double* out) {
    if (!f || !out) return fail(RLX_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out = relax::magnetic_energy(vec2_of(f));
        return RLX_OK;
    });
}

rlx_status rlx_field_euler_residual(const rlx_field* f, double* out) {
    if (!f || !out) return fail(RLX_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out = relax::euler_residual(vec2_of(f));
        return RLX_OK;
    });
}

rlx_status rlx_field_max_divergence(const rlx_field* f, double* out) {
    if (!f || !out) return fail(RLX_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out = relax::max_spectral_divergence(vec2_of(f));
        return RLX_OK;
    });
}

} // extern "C"
