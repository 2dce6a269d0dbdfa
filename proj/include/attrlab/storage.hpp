#pragma once
// On-disk formats. A phase vector is a little-endian binary file
//   magic "ALPV" | u32 version=1 | u32 basis kind | i32 trunc | f64 length |
//   u64 coeff count | f64 coeffs...
// plus a JSON descriptor. A trajectory store is a directory holding
// manifest.json and coeffs.bin (n_samples contiguous coefficient blocks).

#include <filesystem>
#include <string>

#include "attrlab/attractor.hpp"
#include "attrlab/trajectory.hpp"

namespace attrlab {

void save_phase_vector(const PhaseVector& v, const std::filesystem::path& path);
PhaseVector load_phase_vector(const std::filesystem::path& path);

void save_trajectory(const Trajectory& u, const std::filesystem::path& dir,
                     std::uint64_t seed = 0);
Trajectory load_trajectory(const std::filesystem::path& dir);

void save_library(const PieceLibrary& lib, const std::filesystem::path& dir);
std::shared_ptr<PieceLibrary> load_library(const std::filesystem::path& dir);

// net serialized as member indices + provenance; the library is referenced by
// relative path and must load alongside
void save_net(const TrackingNet& net, const std::filesystem::path& path,
              const std::string& library_rel);
TrackingNet load_net(const std::filesystem::path& path);

// plot-ready CSV: header then rows
void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

// FNV-1a of a file's bytes, hex string (manifest hashes in reports)
std::string file_hash_hex(const std::filesystem::path& path);
std::string bytes_hash_hex(const std::string& bytes);

}  // namespace attrlab
