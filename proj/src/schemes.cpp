#include "bates/schemes.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace bates {

std::string to_string(Family f) { return f == Family::MCS ? "MCS" : "Do"; }

Family family_from_string(const std::string& name) {
    if (name == "MCS" || name == "mcs") return Family::MCS;
    if (name == "Do" || name == "do" || name == "DO" || name == "Douglas") return Family::Do;
    throw ParameterError("unknown scheme family: " + name);
}

void SchemeConfig::validate() const {
    if (adaptation < 1 || adaptation > 3) throw ParameterError("SchemeConfig: adaptation must be 1, 2 or 3");
    if (!(theta > 0.0 && theta <= 1.0)) throw ParameterError("SchemeConfig: theta must be in (0, 1]");
    if (n_steps < 1) throw ParameterError("SchemeConfig: n_steps must be >= 1");
}

BandedMatrix implicit_matrix(const SplitOperators& ops, int dir, double theta_dt) {
    const SparseRowMatrix& a = dir == 1 ? ops.a1 : ops.a2;
    SparseRowMatrix id(a.rows(), a.cols());
    id.setIdentity();
    const SparseRowMatrix m = id - theta_dt * a;
    if (dir == 1) return BandedMatrix::from_sparse(m, 1, 1);
    const auto perm = v_major_permutation(ops.ns, ops.nv);
    return BandedMatrix::from_sparse(m, 1, 2, perm);
}

PideSystem::PideSystem(const SplitOperators& ops, double theta_dt)
    : ops_(ops),
      lu1_(implicit_matrix(ops, 1, theta_dt)),
      lu2_(implicit_matrix(ops, 2, theta_dt)),
      perm_(v_major_permutation(ops.ns, ops.nv)),
      scratch_(ops.size()) {}

void PideSystem::f0j(double t, std::span<const double> in, std::span<double> out) {
    ops_.apply_a0j(in, ops_.boundary_value(t), out);
    ++jump_evals_;
}

void PideSystem::f0d(double t, std::span<const double> in, std::span<double> out) {
    ops_.apply_a0d(in, ops_.boundary_value(t), out);
}

void PideSystem::f1(double t, std::span<const double> in, std::span<double> out) {
    ops_.apply_a1(in, ops_.boundary_value(t), out);
}

void PideSystem::f2(double t, std::span<const double> in, std::span<double> out) {
    ops_.apply_a2(in, ops_.boundary_value(t), out);
}

void PideSystem::add_source(int dir, double t, double scale, std::span<double> out) const {
    const std::vector<double>& unit = dir == 1 ? ops_.g1_unit : ops_.g2_unit;
    const double b = scale * ops_.boundary_value(t);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += b * unit[k];
}

void PideSystem::solve(int dir, std::span<double> inout) {
    if (dir == 1) {
        lu1_.solve_in_place(inout);
        return;
    }
    for (std::size_t a = 0; a < perm_.size(); ++a) scratch_[a] = inout[perm_[a]];
    lu2_.solve_in_place(scratch_);
    for (std::size_t a = 0; a < perm_.size(); ++a) inout[perm_[a]] = scratch_[a];
}

RunResult run(const SplitOperators& ops, const BatesParams& params, const SchemeConfig& cfg,
              std::span<const double> u0) {
    cfg.validate();
    const double dt = cfg.dt(params.T);
    PideSystem sys(ops, cfg.theta * dt);
    RunResult res;
    res.diagnostics.factorizations = sys.factorizations();
    res.u = integrate(sys, cfg, dt, u0, &res.diagnostics, [&sys] { return sys.jump_evaluations(); });
    return res;
}

namespace {

constexpr char kMagic[8] = {'B', 'A', 'T', 'E', 'S', 'R', 'E', 'F'};
constexpr std::uint32_t kVersion = 1;

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

std::string ReferenceCache::key(const BatesParams& p, const SpatialGrid& grid, std::size_t n_ref) {
    std::ostringstream os;
    os.precision(17);
    os << "bates-ref-v1|" << p.kappa << '|' << p.eta << '|' << p.sigma << '|' << p.rho << '|' << p.r << '|'
       << p.lambda << '|' << p.gamma << '|' << p.delta << '|' << p.T << '|' << p.K << '|' << grid.m1() << '|'
       << grid.m2() << '|' << grid.s.back() << '|' << grid.v.back() << '|' << grid.stretch_s << '|'
       << grid.stretch_v << '|' << n_ref;
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a(os.str())));
    return hex;
}

std::filesystem::path ReferenceCache::path_for(const std::string& key) const { return dir_ / ("ref_" + key + ".bin"); }

std::optional<std::vector<double>> ReferenceCache::load(const std::string& key, std::size_t expected_size) const {
    std::ifstream in(path_for(key), std::ios::binary);
    if (!in) return std::nullopt;
    char magic[8];
    std::uint32_t version = 0, reserved = 0;
    std::uint64_t key_len = 0, count = 0;
    in.read(magic, 8);
    in.read(reinterpret_cast<char*>(&version), sizeof version);
    in.read(reinterpret_cast<char*>(&reserved), sizeof reserved);
    in.read(reinterpret_cast<char*>(&key_len), sizeof key_len);
    if (!in || std::memcmp(magic, kMagic, 8) != 0 || version != kVersion || key_len > 256) return std::nullopt;
    std::string stored(key_len, '\0');
    in.read(stored.data(), static_cast<std::streamsize>(key_len));
    in.read(reinterpret_cast<char*>(&count), sizeof count);
    if (!in || stored != key || count != expected_size) return std::nullopt;
    std::vector<double> u(count);
    in.read(reinterpret_cast<char*>(u.data()), static_cast<std::streamsize>(count * sizeof(double)));
    if (!in) return std::nullopt;
    return u;
}

void ReferenceCache::store(const std::string& key, std::span<const double> u) const {
    std::filesystem::create_directories(dir_);
    const auto final_path = path_for(key);
    auto tmp = final_path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("ReferenceCache: cannot write " + tmp.string());
        const std::uint32_t version = kVersion, reserved = 0;
        const std::uint64_t key_len = key.size(), count = u.size();
        out.write(kMagic, 8);
        out.write(reinterpret_cast<const char*>(&version), sizeof version);
        out.write(reinterpret_cast<const char*>(&reserved), sizeof reserved);
        out.write(reinterpret_cast<const char*>(&key_len), sizeof key_len);
        out.write(key.data(), static_cast<std::streamsize>(key.size()));
        out.write(reinterpret_cast<const char*>(&count), sizeof count);
        out.write(reinterpret_cast<const char*>(u.data()), static_cast<std::streamsize>(u.size() * sizeof(double)));
    }
    std::filesystem::rename(tmp, final_path);
}

std::vector<double> reference_solution(const SplitOperators& ops, const SpatialGrid& grid,
                                       const BatesParams& params, std::size_t n_ref, const ReferenceCache* cache) {
    std::string key;
    if (cache) {
        key = ReferenceCache::key(params, grid, n_ref);
        if (auto hit = cache->load(key, ops.size())) return *hit;
    }
    const std::vector<double> u0 = payoff_vector(grid, params);
    SchemeConfig cfg{1, Family::MCS, 1.0 / 3.0, n_ref};
    std::vector<double> u = run(ops, params, cfg, u0).u;
    if (cache) cache->store(key, u);
    return u;
}

}  // namespace bates
