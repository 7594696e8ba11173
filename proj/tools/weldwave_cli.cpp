/*
 * Copyright 2026 The Weldwave Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "weldwave/weldwave.hpp"

using namespace weldwave;
namespace fs = std::filesystem;

namespace {

Material load_material(const std::string& path) { return path.empty() ? steel_like() : Material::load(path); }

/// Complex field stored in the first channel triple, undoing the stack scale.
WavefieldGrid field_of(const SampleRecord& r) {
    WavefieldGrid w{Grid2D<complex>(r.nx(), r.ny(), r.dx, r.dy, 0.5 * r.dx, 0.5 * r.dy), units::angular(r.freq_hz),
                    r.provenance};
    for (std::size_t k = 0; k < w.values.size(); ++k) {
        w.values[k] = r.input.scale * complex(r.input.channels[0][k], r.input.channels[1][k]);
    }
    return w;
}

/// Same record with the input rebuilt from a new field.
SampleRecord with_field(SampleRecord r, const WavefieldGrid& w, const Material& mat, double h0, nlohmann::json note) {
    const auto table = make_dispersion_table(mat, w.omega, 0.5 * h0);
    r.input = build_channel_stack(w, table);
    r.metadata["normalization"] = {{"scale", r.input.scale}};
    r.metadata["history"].push_back(std::move(note));
    return r;
}

double plate_thickness(const SampleRecord& r, double fallback) {
    return r.params.plate.h0 > 0.0 ? r.params.plate.h0 : fallback;
}

void write_pgm(const fs::path& path, const Grid2D<double>& g) {
    double lo = INFINITY, hi = -INFINITY;
    for (double v : g.values()) lo = std::min(lo, v), hi = std::max(hi, v);
    const double span = hi > lo ? hi - lo : 1.0;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgument("cannot write " + path.string());
    out << "P5\n" << g.nx() << ' ' << g.ny() << "\n255\n";
    // Image rows run top to bottom, grid rows bottom to top.
    for (std::size_t j = g.ny(); j-- > 0;) {
        for (std::size_t i = 0; i < g.nx(); ++i) {
            out.put(static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * (g(i, j) - lo) / span))));
        }
    }
}

struct SimArgs {
    std::string bc = "scattering", params, config, out;
    std::uint64_t seed = 0;
    std::size_t index = 0, grid = 0, dof_cap = 0;
    double freq_khz = 0.0;
    bool diagnostics = false;
};

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open " + path);
    return nlohmann::json::parse(in);
}

int run_simulation(SolverModel model, const SimArgs& a, const CLI::App& cmd) {
    DatasetConfig c;
    if (!a.config.empty()) c = dataset_config_from_json(read_json(a.config));
    if (a.config.empty() || cmd.count("--class")) c.bc = parse_bc_class(a.bc);
    if (a.config.empty() || cmd.count("--seed")) c.seed = a.seed;
    if (a.grid) c.generate.grid = a.grid;
    if (a.freq_khz > 0.0) c.generate.freq_hz = 1e3 * a.freq_khz;
    if (a.dof_cap) c.generate.nl_mesh.dof_cap = a.dof_cap;
    const SampleParams p = a.params.empty() ? dataset_params(c, a.index) : read_json(a.params).get<SampleParams>();
    const auto t0 = std::chrono::steady_clock::now();
    const auto rec = generate_sample(p, model, c.generate);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_sample(a.out, rec);
    if (a.diagnostics) {
        std::cout << nlohmann::json{{"file", a.out}, {"seconds", seconds}, {"solver", rec.metadata["solver"]}}.dump(2)
                  << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Guided-wave weld simulation and dataset tools"};
    app.require_subcommand(1);

    // dispersion
    auto* disp = app.add_subcommand("dispersion", "Propagating Lamb modes at one frequency");
    double d_khz = 225.0, d_thick_in = 0.25, d_force_mm = 0.0;
    int d_order = 5;
    std::string d_material, d_out;
    disp->add_option("--freq-khz", d_khz, "Frequency (kHz)")->capture_default_str();
    disp->add_option("--thickness-in", d_thick_in, "Plate thickness (in)")->capture_default_str();
    disp->add_option("--max-order", d_order, "Highest mode order per family")->capture_default_str();
    disp->add_option("--material", d_material, "Material JSON file (default steel-like)");
    disp->add_option("--force-radius-mm", d_force_mm,
                     "Gaussian load radius for mode amplitudes (mm); default a quarter of the shortest wavelength");
    disp->add_option("--out", d_out, "Output CSV (stdout when omitted)");

    // simulate-em / simulate-nl
    SimArgs sim_em, sim_nl;
    auto add_sim = [&](const char* name, const char* help, SimArgs& a) {
        auto* s = app.add_subcommand(name, help);
        s->add_option("--class", a.bc, "scattering | periodic | coupon")->capture_default_str();
        s->add_option("--seed", a.seed, "Dataset seed for the parameter draw");
        s->add_option("--index", a.index, "Sample index within the seed");
        s->add_option("--params", a.params, "SampleParams JSON (overrides the draw)");
        s->add_option("--config", a.config, "Dataset config JSON");
        s->add_option("--grid", a.grid, "Label grid size");
        s->add_option("--freq-khz", a.freq_khz, "Frequency (kHz)");
        s->add_flag("--diagnostics", a.diagnostics, "Print solver diagnostics as JSON");
        s->add_option("--out", a.out, "Output WFS file")->required();
        return s;
    };
    auto* sem = add_sim("simulate-em", "Effective-medium sample to a WFS file", sim_em);
    auto* snl = add_sim("simulate-nl", "Full elastic sample to a WFS file", sim_nl);
    snl->add_option("--dof-cap", sim_nl.dof_cap, "Refuse meshes above this many complex DOF");

    // filter
    auto* filt = app.add_subcommand("filter", "Keep one Lamb mode of a WFS wavefield");
    std::string f_in, f_out, f_mode = "A0", f_material;
    filt->add_option("--in", f_in, "Input WFS")->required();
    filt->add_option("--mode", f_mode, "Mode label")->capture_default_str();
    filt->add_option("--out", f_out, "Output WFS")->required();
    filt->add_option("--material", f_material, "Material JSON file");

    // corrupt
    auto* corr = app.add_subcommand("corrupt", "Add noise, speckle and pixel dropout");
    std::string c_in, c_out, c_rule = "std", c_material;
    std::uint64_t c_seed = 0;
    std::string c_mask = "random";
    corr->add_option("--in", c_in, "Input WFS")->required();
    corr->add_option("--seed", c_seed, "Random seed")->required();
    corr->add_option("--out", c_out, "Output WFS")->required();
    corr->add_option("--sigma-rule", c_rule, "std | variance of |phi|")->capture_default_str();
    corr->add_option("--mask", c_mask, "random | always | never")->capture_default_str();
    corr->add_option("--material", c_material, "Material JSON file");

    // import-scan
    auto* imp = app.add_subcommand("import-scan", "Measured amplitude/phase grids to WFS");
    std::string i_amp, i_phase, i_meta, i_out, i_material;
    double i_crop_w = 0.0, i_crop_h = 0.0, i_thick = units::inches(0.25);
    std::size_t i_grid = 0;
    imp->add_option("--amp", i_amp, "Amplitude grid (.f32 or .csv)")->required();
    imp->add_option("--phase", i_phase, "Phase grid in radians (.f32 or .csv)")->required();
    imp->add_option("--meta", i_meta, "JSON sidecar")->required();
    imp->add_option("--out", i_out, "Output WFS")->required();
    imp->add_option("--crop-width", i_crop_w, "Centred crop width (m)");
    imp->add_option("--crop-height", i_crop_h, "Centred crop height (m)");
    imp->add_option("--grid", i_grid, "Resample to grid x grid cells");
    imp->add_option("--thickness", i_thick, "Plate thickness (m)")->capture_default_str();
    imp->add_option("--material", i_material, "Material JSON file");

    // gen-dataset
    auto* gen = app.add_subcommand("gen-dataset", "Generate a dataset with manifest");
    std::string g_bc = "coupon", g_model = "em", g_out = "dataset", g_config;
    std::size_t g_count = 10, g_grid = 128;
    std::uint64_t g_seed = 0;
    unsigned g_workers = 1;
    gen->add_option("--class", g_bc, "scattering | periodic | coupon")->capture_default_str();
    gen->add_option("--model", g_model, "em | nl")->capture_default_str();
    gen->add_option("--count", g_count, "Number of samples")->capture_default_str();
    gen->add_option("--seed", g_seed, "Dataset seed")->capture_default_str();
    gen->add_option("--grid", g_grid, "Label grid size")->capture_default_str();
    gen->add_option("--out-dir", g_out, "Output directory")->capture_default_str();
    gen->add_option("--workers", g_workers, "Worker threads")->capture_default_str();
    gen->add_option("--config", g_config, "Dataset config JSON; flags given explicitly override it");

    // info
    auto* info = app.add_subcommand("info", "Print a WFS header and hashes");
    std::string n_file;
    info->add_option("file", n_file, "WFS file")->required();

    // export-plot
    auto* plot = app.add_subcommand("export-plot", "Grayscale PGM of one channel or label");
    std::string p_file, p_out;
    int p_channel = 2;
    plot->add_option("file", p_file, "WFS file")->required();
    plot->add_option("--channel", p_channel, "0-8 input channels, 9 stiffness label, 10 crack label")->capture_default_str();
    plot->add_option("--out", p_out, "Output .pgm")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (disp->parsed()) {
            const double h0 = units::inches(d_thick_in);
            auto table = make_dispersion_table(load_material(d_material), units::angular(1e3 * d_khz), 0.5 * h0, d_order);
            GenerateOptions source;
            source.force_radius = 1e-3 * d_force_mm;
            table = amplitude_projection(table, SurfaceForce::gaussian(0.0, 0.0, source_radius(table, source)));
            std::ofstream file;
            if (!d_out.empty()) {
                file.open(d_out);
                if (!file) throw InvalidArgument("cannot write " + d_out);
            }
            std::ostream& out = d_out.empty() ? std::cout : file;
            out << "symmetry,order,k_rad_per_m,vp_m_per_s,vg_m_per_s,amplitude\n";
            out.precision(17);
            for (std::size_t i = 0; i < table.modes.size(); ++i) {
                const auto& m = table.modes[i];
                out << symmetry_char(m.symmetry) << ',' << m.order << ',' << m.k << ',' << m.vp << ',' << m.vg << ','
                    << table.amplitudes[i] << '\n';
            }
        } else if (sem->parsed()) {
            return run_simulation(SolverModel::EM, sim_em, *sem);
        } else if (snl->parsed()) {
            return run_simulation(SolverModel::NL, sim_nl, *snl);
        } else if (filt->parsed()) {
            const auto rec = read_sample(f_in);
            const auto mat = load_material(f_material);
            const double h0 = plate_thickness(rec, units::inches(0.25));
            const auto w = field_of(rec);
            const auto table = make_dispersion_table(mat, w.omega, 0.5 * h0);
            write_sample(f_out, with_field(rec, mode_filter(w, table, f_mode), mat, h0, {{"filter", f_mode}}));
        } else if (corr->parsed()) {
            const auto rec = read_sample(c_in);
            CorruptionSpec spec;
            if (c_rule == "variance") {
                spec.rule = NoiseScaleRule::VarianceOfMagnitude;
            } else if (c_rule != "std") {
                throw InvalidArgument("unknown sigma rule '" + c_rule + "'");
            }
            if (c_mask == "always") {
                spec.mask = MaskMode::Always;
            } else if (c_mask == "never") {
                spec.mask = MaskMode::Never;
            } else if (c_mask != "random") {
                throw InvalidArgument("unknown mask mode '" + c_mask + "'");
            }
            RandomStream rng(c_seed);
            CorruptionRecord cr;
            const auto noisy = synth_corrupt(field_of(rec), spec, rng, &cr);
            const auto mat = load_material(c_material);
            write_sample(c_out, with_field(rec, noisy, mat, plate_thickness(rec, units::inches(0.25)),
                                           {{"corrupt", cr}, {"seed", c_seed}}));
        } else if (imp->parsed()) {
            WavefieldGrid w = import_scan_files(i_amp, i_phase, i_meta);
            if (i_crop_w > 0.0 || i_crop_h > 0.0) {
                w = crop_centered(w, i_crop_w > 0.0 ? i_crop_w : w.nx() * w.dx(), i_crop_h > 0.0 ? i_crop_h : w.ny() * w.dy());
            }
            if (i_grid) {
                if (i_grid < 2) throw InvalidArgument("grid must be at least 2");
                const double n1 = static_cast<double>(i_grid - 1);
                const Grid2D<double> target(i_grid, i_grid, w.values.width() / n1, w.values.height() / n1,
                                            w.values.x0(), w.values.y0());
                w.values = resample_grid(w.values, target);
            }
            w.validate();
            SampleRecord rec;
            rec.provenance = Provenance::Scan;
            rec.dx = w.dx();
            rec.dy = w.dy();
            rec.freq_hz = units::hertz(w.omega);
            const auto mat = load_material(i_material);
            rec.input = build_channel_stack(w, make_dispersion_table(mat, w.omega, 0.5 * i_thick));
            rec.label_stiffness = Grid2D<float>::like(w.values, 1.0f);
            rec.label_crack = Grid2D<std::uint8_t>::like(w.values, 0);
            rec.params.plate = {w.nx() * w.dx(), w.ny() * w.dy(), i_thick};
            rec.metadata = {{"normalization", {{"scale", rec.input.scale}}},
                            {"labels", "none"},
                            {"source", {{"amplitude", i_amp}, {"phase", i_phase}, {"meta", i_meta}}}};
            write_sample(i_out, rec);
        } else if (gen->parsed()) {
            DatasetConfig c;
            if (!g_config.empty()) c = dataset_config_from_json(read_json(g_config));
            const bool fresh = g_config.empty();
            if (fresh || gen->count("--class")) c.bc = parse_bc_class(g_bc);
            if (fresh || gen->count("--model")) c.model = parse_solver_model(g_model);
            if (fresh || gen->count("--count")) c.count = g_count;
            if (fresh || gen->count("--seed")) c.seed = g_seed;
            if (fresh || gen->count("--grid")) c.generate.grid = g_grid;
            c.out_dir = g_out;
            c.workers = g_workers;
            const auto manifest = generate_dataset(c);
            std::cout << "wrote " << manifest["files"].size() << " samples to " << g_out << " ("
                      << manifest["failures"].size() << " failed)\n";
            return manifest["failures"].empty() ? 0 : 2;
        } else if (info->parsed()) {
            const auto bytes = read_file_bytes(n_file);
            const auto rec = decode_sample(bytes.data(), bytes.size());
            if (bytes.size() < 4) throw InvalidArgument("file too short");
            std::uint32_t crc = 0;
            for (int b = 0; b < 4; ++b) crc |= static_cast<std::uint32_t>(bytes[bytes.size() - 4 + b]) << (8 * b);
            char crc_hex[9];
            std::snprintf(crc_hex, sizeof crc_hex, "%08x", crc);
            std::cout << nlohmann::json{{"file", n_file},
                                        {"format_version", rec.format_version},
                                        {"nx", rec.nx()},
                                        {"ny", rec.ny()},
                                        {"dx_m", rec.dx},
                                        {"dy_m", rec.dy},
                                        {"freq_hz", rec.freq_hz},
                                        {"channels", channel_names()},
                                        {"provenance", to_string(rec.provenance)},
                                        {"crc32", crc_hex},
                                        {"sha256", sha256_hex(bytes.data(), bytes.size())},
                                        {"params", rec.params},
                                        {"metadata", rec.metadata}}
                             .dump(2)
                      << '\n';
        } else if (plot->parsed()) {
            const auto rec = read_sample(p_file);
            Grid2D<double> g(rec.nx(), rec.ny(), rec.dx, rec.dy);
            if (p_channel >= 0 && p_channel < static_cast<int>(channel_count)) {
                for (std::size_t k = 0; k < g.size(); ++k) g[k] = rec.input.channels[p_channel][k];
            } else if (p_channel == 9) {
                for (std::size_t k = 0; k < g.size(); ++k) g[k] = rec.label_stiffness[k];
            } else if (p_channel == 10) {
                for (std::size_t k = 0; k < g.size(); ++k) g[k] = rec.label_crack[k];
            } else {
                throw InvalidArgument("channel must be in [0, 10]");
            }
            write_pgm(p_out, g);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
