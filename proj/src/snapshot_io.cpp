#include "acns/snapshot_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "acns/errors.hpp"

namespace acns {

namespace {

constexpr std::uint32_t kVersion = 1;

void put_u32(std::ofstream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), 4);
}
void put_f64(std::ofstream& out, double v) {
    out.write(reinterpret_cast<const char*>(&v), 8);
}

std::uint32_t get_u32(std::ifstream& in) {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), 4);
    return v;
}
double get_f64(std::ifstream& in) {
    double v = 0;
    in.read(reinterpret_cast<char*>(&v), 8);
    return v;
}

void write_header(std::ofstream& out, SnapshotKind kind, const DomainGeometry& g,
                  double epsilon, double time) {
    out.write("ACNS", 4);
    put_u32(out, kVersion);
    put_u32(out, static_cast<std::uint32_t>(kind));
    put_u32(out, std::uint32_t(g.dim));
    for (int a = 0; a < g.dim; ++a) put_u32(out, std::uint32_t(g.cells[a]));
    for (int a = 0; a < g.dim; ++a) put_f64(out, g.spacing[a]);
    put_f64(out, epsilon);
    put_f64(out, time);
}

void write_doubles(std::ofstream& out, const std::vector<double>& v) {
    out.write(reinterpret_cast<const char*>(v.data()), std::streamsize(v.size() * 8));
}

}  // namespace

void write_state_snapshot(const std::filesystem::path& path, const StaggeredField& u,
                          const ScalarField& p, double epsilon, double time) {
    require_same_geometry(u.geom, p.geom);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open snapshot file for writing: " + path.string());
    write_header(out, SnapshotKind::State, *u.geom, epsilon, time);
    for (int a = 0; a < u.geom->dim; ++a) write_doubles(out, u.comp[a]);
    write_doubles(out, p.v);
    if (!out) throw Error("snapshot write failed: " + path.string());
}

void write_scalar_snapshot(const std::filesystem::path& path, const ScalarField& f,
                           double epsilon, double time) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open snapshot file for writing: " + path.string());
    write_header(out, SnapshotKind::Scalar, *f.geom, epsilon, time);
    write_doubles(out, f.v);
    if (!out) throw Error("snapshot write failed: " + path.string());
}

StateSnapshot read_state_snapshot(const std::filesystem::path& path, const GeometryPtr& geom) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CorruptSnapshot("cannot open snapshot: " + path.string());
    char magic[4] = {};
    in.read(magic, 4);
    if (std::memcmp(magic, "ACNS", 4) != 0)
        throw CorruptSnapshot("bad magic in " + path.string());
    if (get_u32(in) != kVersion) throw CorruptSnapshot("unknown version in " + path.string());
    StateSnapshot snap;
    snap.header.kind = static_cast<SnapshotKind>(get_u32(in));
    snap.header.dim = int(get_u32(in));
    if (snap.header.dim != geom->dim)
        throw CorruptSnapshot("dimension mismatch in " + path.string());
    for (int a = 0; a < snap.header.dim; ++a) snap.header.cells[a] = int(get_u32(in));
    for (int a = 0; a < snap.header.dim; ++a) snap.header.spacing[a] = get_f64(in);
    snap.header.epsilon = get_f64(in);
    snap.header.time = get_f64(in);
    if (!in) throw CorruptSnapshot("truncated header in " + path.string());
    for (int a = 0; a < snap.header.dim; ++a)
        if (snap.header.cells[a] != geom->cells[a])
            throw CorruptSnapshot("cell count mismatch in " + path.string());

    auto read_into = [&](std::vector<double>& v) {
        in.read(reinterpret_cast<char*>(v.data()), std::streamsize(v.size() * 8));
        if (std::size_t(in.gcount()) != v.size() * 8)
            throw CorruptSnapshot("payload shorter than header-declared shape: " +
                                  path.string());
    };

    const auto kind = snap.header.kind;
    if (kind == SnapshotKind::State || kind == SnapshotKind::Staggered) {
        snap.u = StaggeredField(geom);
        for (int a = 0; a < geom->dim; ++a) read_into(snap.u.comp[a]);
    }
    if (kind == SnapshotKind::State || kind == SnapshotKind::Scalar) {
        snap.p = ScalarField(geom);
        read_into(snap.p.v);
    }
    // exact-length contract
    in.peek();
    if (!in.eof()) throw CorruptSnapshot("payload longer than header-declared shape: " +
                                         path.string());
    return snap;
}

}  // namespace acns
