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
#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <openssl/evp.h>

#include <json.hpp>

#include "weldwave/dataset/wfs.hpp"

namespace weldwave {

inline constexpr const char* generator_version = "weldwave-1.0.0";

inline std::string sha256_hex(const unsigned char* data, std::size_t size) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data, size, md, &len, EVP_sha256(), nullptr) != 1) throw Error("SHA-256 digest failed");
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return os.str();
}

inline std::string sha256_file(const std::filesystem::path& path) {
    const auto bytes = read_file_bytes(path);
    return sha256_hex(bytes.data(), bytes.size());
}

struct DatasetConfig {
    BcClass bc = BcClass::FreeFree;
    SolverModel model = SolverModel::EM;
    std::size_t count = 10;
    std::uint64_t seed = 0;
    double train_fraction = 0.8;
    DistributionConfig distributions;
    GenerateOptions generate;
    std::filesystem::path out_dir = "dataset";
    unsigned workers = 1;
};

/// Settings that determine dataset content. Output location and worker count
/// are deliberately absent.
inline nlohmann::json content_config(const DatasetConfig& c) {
    return {{"bc_class", to_string(c.bc)},       {"model", to_string(c.model)},
            {"count", c.count},                  {"seed", c.seed},
            {"train_fraction", c.train_fraction}, {"distributions", c.distributions},
            {"generate", c.generate}};
}

inline DatasetConfig dataset_config_from_json(const nlohmann::json& j) {
    DatasetConfig c;
    if (j.contains("bc_class")) c.bc = parse_bc_class(j.at("bc_class").get<std::string>());
    if (j.contains("model")) c.model = parse_solver_model(j.at("model").get<std::string>());
    c.count = j.value("count", c.count);
    c.seed = j.value("seed", c.seed);
    c.train_fraction = j.value("train_fraction", c.train_fraction);
    if (j.contains("distributions")) j.at("distributions").get_to(c.distributions);
    if (j.contains("generate")) j.at("generate").get_to(c.generate);
    return c;
}

/// A0 wavelength at the generation frequency, the default force margin.
inline double a0_wavelength(const GenerateOptions& g, double h0) {
    const auto table = make_dispersion_table(g.material, units::angular(g.freq_hz), 0.5 * h0);
    const LambMode* a0 = table.find(Symmetry::A, 0);
    if (!a0) throw MissingMode("A0 not found");
    return two_pi / a0->k;
}

/// Parameter stream of sample `index`.
inline SampleParams dataset_params(const DatasetConfig& c, std::size_t index) {
    DistributionConfig d = c.distributions;
    if (!(d.force_margin > 0.0)) d.force_margin = a0_wavelength(c.generate, plate_for(c.bc).h0);
    RandomStream rng(derive_seed(c.seed, index, Substream::params));
    return sample_params(c.bc, rng, d);
}

/// Indices assigned to training; the rest form the test set. Depends only
/// on the dataset seed, the sample count and the fraction.
inline std::vector<bool> split_assignment(std::uint64_t seed, std::size_t count, double train_fraction) {
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<std::uint64_t> key(count);
    for (std::size_t i = 0; i < count; ++i) key[i] = derive_seed(seed, i, Substream::split);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key[a] < key[b] || (key[a] == key[b] && a < b); });
    const auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(count)));
    std::vector<bool> train(count, false);
    for (std::size_t r = 0; r < n_train && r < count; ++r) train[order[r]] = true;
    return train;
}

inline std::string sample_file_name(const DatasetConfig& c, std::size_t index) {
    std::ostringstream os;
    os << to_string(c.model) << '_' << to_string(c.bc) << '_' << std::setw(6) << std::setfill('0') << index << ".wfs";
    return os.str();
}

struct SampleOutcome {
    bool ok = false;
    std::string file;
    std::string sha256;
    std::string error;
};

/// Generates every sample on `workers` threads, writes the WFS files and the
/// manifest. Failed samples are listed, not retried.
inline nlohmann::json generate_dataset(const DatasetConfig& c) {
    if (c.count == 0) throw InvalidArgument("dataset count must be positive");
    if (!(c.train_fraction >= 0.0 && c.train_fraction <= 1.0)) throw InvalidArgument("train fraction must lie in [0, 1]");
    std::filesystem::create_directories(c.out_dir);
    std::vector<SampleOutcome> outcomes(c.count);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < c.count; i = next++) {
            SampleOutcome& o = outcomes[i];
            o.file = sample_file_name(c, i);
            try {
                const auto rec = generate_sample(dataset_params(c, i), c.model, c.generate);
                const auto bytes = encode_sample(rec);
                write_file_bytes(c.out_dir / o.file, bytes);
                o.sha256 = sha256_hex(bytes.data(), bytes.size());
                o.ok = true;
            } catch (const std::exception& e) {
                o.error = e.what();
            }
        }
    };
    const unsigned n_workers = std::max(1u, std::min<unsigned>(c.workers, static_cast<unsigned>(c.count)));
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < n_workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    const auto train = split_assignment(c.seed, c.count, c.train_fraction);
    nlohmann::json files = nlohmann::json::array(), failures = nlohmann::json::array();
    nlohmann::json train_idx = nlohmann::json::array(), test_idx = nlohmann::json::array();
    std::size_t ok = 0;
    for (std::size_t i = 0; i < c.count; ++i) {
        (train[i] ? train_idx : test_idx).push_back(i);
        if (outcomes[i].ok) {
            ++ok;
            files.push_back({{"index", i}, {"file", outcomes[i].file}, {"sha256", outcomes[i].sha256},
                             {"split", train[i] ? "train" : "test"}});
        } else {
            failures.push_back({{"index", i}, {"error", outcomes[i].error}});
        }
    }
    nlohmann::json manifest = {
        {"format", "weldwave-dataset-manifest"},
        {"generator_version", generator_version},
        {"wfs_format_version", wfs_format_version},
        {"dataset_seed", c.seed},
        {"config", content_config(c)},
        {"counts", {{to_string(c.model == SolverModel::EM ? Provenance::EM : Provenance::NL), {{to_string(c.bc), ok}}}}},
        {"split", {{"train", train_idx}, {"test", test_idx}}},
        {"files", files},
        {"failures", failures}};
    std::ofstream(c.out_dir / "manifest.json") << manifest.dump(2) << '\n';
    return manifest;
}

/// Recomputes every listed hash; returns the files that do not match.
inline std::vector<std::string> verify_manifest(const nlohmann::json& manifest, const std::filesystem::path& dir) {
    std::vector<std::string> bad;
    for (const auto& f : manifest.at("files")) {
        const std::string name = f.at("file");
        const auto path = dir / name;
        if (!std::filesystem::exists(path) || sha256_file(path) != f.at("sha256").get<std::string>()) bad.push_back(name);
    }
    return bad;
}

}  // namespace weldwave
