#include "attrlab/storage.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace attrlab {

static_assert(std::endian::native == std::endian::little,
              "stored formats are little-endian");

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr char kMagic[4] = {'A', 'L', 'P', 'V'};

void write_exact(std::ofstream& os, const void* p, std::size_t n) {
    os.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
    if (!os) throw ValidationError("write failed");
}

void read_exact(std::ifstream& is, void* p, std::size_t n) {
    is.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (is.gcount() != static_cast<std::streamsize>(n))
        throw ValidationError("truncated file");
}

json basis_json(const BasisId& b) {
    return json{{"kind", b.kind == BasisKind::nse2d ? "nse2d" : "rds_sine"},
                {"trunc", b.trunc},
                {"length", b.length}};
}

BasisId basis_from_json(const json& j) {
    BasisId b;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "nse2d")
        b.kind = BasisKind::nse2d;
    else if (kind == "rds_sine")
        b.kind = BasisKind::rds_sine;
    else
        throw ValidationError("unknown basis kind " + kind);
    b.trunc = j.at("trunc").get<int>();
    b.length = j.at("length").get<double>();
    return b;
}

void dump_json(const json& j, const fs::path& path) {
    std::ofstream os(path);
    if (!os) throw ValidationError("cannot open " + path.string());
    os << j.dump(2) << "\n";
}

json slurp_json(const fs::path& path) {
    std::ifstream is(path);
    if (!is) throw ValidationError("cannot open " + path.string());
    return json::parse(is);
}

}  // namespace

void save_phase_vector(const PhaseVector& v, const fs::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ValidationError("cannot open " + path.string());
    const std::uint32_t version = 1;
    const auto kind = static_cast<std::uint32_t>(v.basis.kind);
    const std::int32_t trunc = v.basis.trunc;
    const double length = v.basis.length;
    const std::uint64_t count = v.data.size();
    write_exact(os, kMagic, 4);
    write_exact(os, &version, 4);
    write_exact(os, &kind, 4);
    write_exact(os, &trunc, 4);
    write_exact(os, &length, 8);
    write_exact(os, &count, 8);
    write_exact(os, v.data.data(), 8 * count);
    dump_json(json{{"format", "attrlab-phase-vector"},
                   {"version", 1},
                   {"basis", basis_json(v.basis)},
                   {"coeff_count", count},
                   {"byte_order", "LE"}},
              path.string() + ".json");
}

PhaseVector load_phase_vector(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ValidationError("cannot open " + path.string());
    char magic[4];
    std::uint32_t version, kind;
    std::int32_t trunc;
    double length;
    std::uint64_t count;
    read_exact(is, magic, 4);
    if (std::memcmp(magic, kMagic, 4) != 0)
        throw ValidationError("bad magic in " + path.string());
    read_exact(is, &version, 4);
    if (version != 1) throw ValidationError("unsupported version");
    read_exact(is, &kind, 4);
    read_exact(is, &trunc, 4);
    read_exact(is, &length, 8);
    read_exact(is, &count, 8);
    PhaseVector v;
    v.basis = BasisId{static_cast<BasisKind>(kind), trunc, length};
    if (count != basis_num_doubles(v.basis))
        throw ValidationError("coefficient count does not match the basis");
    v.data.resize(count);
    read_exact(is, v.data.data(), 8 * count);
    return v;
}

void save_trajectory(const Trajectory& u, const fs::path& dir, std::uint64_t seed) {
    fs::create_directories(dir);
    dump_json(json{{"format", "attrlab-trajectory"},
                   {"version", 1},
                   {"basis", basis_json(u.basis)},
                   {"symbol", u.symbol_id},
                   {"t_start", u.t_start},
                   {"dt", u.dt},
                   {"n_samples", u.n_samples},
                   {"block", u.block()},
                   {"seed", seed},
                   {"byte_order", "LE"}},
              dir / "manifest.json");
    std::ofstream os(dir / "coeffs.bin", std::ios::binary);
    if (!os) throw ValidationError("cannot open coeffs.bin");
    write_exact(os, u.data.data(), 8 * u.data.size());
}

Trajectory load_trajectory(const fs::path& dir) {
    const json m = slurp_json(dir / "manifest.json");
    Trajectory u;
    u.basis = basis_from_json(m.at("basis"));
    u.symbol_id = m.at("symbol").get<std::string>();
    u.t_start = m.at("t_start").get<double>();
    u.dt = m.at("dt").get<double>();
    u.n_samples = m.at("n_samples").get<std::size_t>();
    const auto block = m.at("block").get<std::size_t>();
    if (block != u.block())
        throw ValidationError("stored block size does not match the basis");
    std::ifstream is(dir / "coeffs.bin", std::ios::binary);
    if (!is) throw ValidationError("cannot open coeffs.bin");
    u.data.resize(u.n_samples * block);
    read_exact(is, u.data.data(), 8 * u.data.size());
    return u;
}

void save_library(const PieceLibrary& lib, const fs::path& dir) {
    fs::create_directories(dir / "runs");
    json pieces = json::array();
    for (const auto& p : lib.pieces)
        pieces.push_back(json{{"run", p.run}, {"start", p.start}});
    json runs = json::array();
    for (std::size_t r = 0; r < lib.runs.size(); ++r) {
        char name[16];
        std::snprintf(name, sizeof name, "runs/%03zu", r);
        save_trajectory(*lib.runs[r], dir / name);
        runs.push_back(name);
    }
    dump_json(json{{"format", "attrlab-piece-library"},
                   {"version", 1},
                   {"basis", basis_json(lib.basis)},
                   {"T", lib.T},
                   {"dt", lib.dt},
                   {"n_per", lib.n_per},
                   {"t0", lib.t0},
                   {"stride", lib.stride},
                   {"horizon", lib.horizon},
                   {"kernel_proxy_note",
                    "pieces are post-transient windows of long runs standing in "
                    "for complete-trajectory restrictions"},
                   {"pieces", pieces},
                   {"runs", runs}},
              dir / "library.json");
}

std::shared_ptr<PieceLibrary> load_library(const fs::path& dir) {
    const json m = slurp_json(dir / "library.json");
    auto lib = std::make_shared<PieceLibrary>();
    lib->basis = basis_from_json(m.at("basis"));
    lib->T = m.at("T").get<double>();
    lib->dt = m.at("dt").get<double>();
    lib->n_per = m.at("n_per").get<std::size_t>();
    lib->t0 = m.at("t0").get<double>();
    lib->stride = m.at("stride").get<double>();
    lib->horizon = m.at("horizon").get<double>();
    for (const auto& rj : m.at("runs"))
        lib->runs.push_back(std::make_shared<const Trajectory>(
            load_trajectory(dir / rj.get<std::string>())));
    for (const auto& pj : m.at("pieces"))
        lib->pieces.push_back(
            {pj.at("run").get<int>(), pj.at("start").get<std::size_t>()});
    return lib;
}

void save_net(const TrackingNet& net, const fs::path& path,
              const std::string& library_rel) {
    json members = json::array();
    for (std::size_t m : net.members) {
        const auto& ref = net.library->pieces[m];
        members.push_back(json{{"piece", m},
                               {"run", ref.run},
                               {"start", ref.start},
                               {"t_star", net.library->piece_start_time(m)}});
    }
    dump_json(json{{"format", "attrlab-tracking-net"},
                   {"version", 1},
                   {"epsilon", net.epsilon},
                   {"T", net.T},
                   {"cover_radius", net.cover_radius},
                   {"library", library_rel},
                   {"members", members}},
              path);
}

TrackingNet load_net(const fs::path& path) {
    const json m = slurp_json(path);
    TrackingNet net;
    net.epsilon = m.at("epsilon").get<double>();
    net.T = m.at("T").get<double>();
    net.cover_radius = m.at("cover_radius").get<double>();
    net.library = load_library(path.parent_path() / m.at("library").get<std::string>());
    for (const auto& mm : m.at("members"))
        net.members.push_back(mm.at("piece").get<std::size_t>());
    return net;
}

void write_csv(const fs::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream os(path);
    if (!os) throw ValidationError("cannot open " + path.string());
    for (std::size_t i = 0; i < header.size(); ++i)
        os << header[i] << (i + 1 < header.size() ? "," : "\n");
    os.precision(17);
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << row[i] << (i + 1 < row.size() ? "," : "\n");
    }
}

std::string bytes_hash_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

std::string file_hash_hex(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ValidationError("cannot open " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return bytes_hash_hex(ss.str());
}

}  // namespace attrlab
