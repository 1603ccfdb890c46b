#include "kacroots/joint_table.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace kac {

long joint_weight(JointWeights w, long i) {
    if (w == JointWeights::U) return i;
    return (i % 2 == 1) ? i : -i; // (-1)^(i-1) i
}

namespace {
const mpz_class kZero = 0;
}

const mpz_class& JointSumTable::count(long s, long t) const {
    if (n < 0) return kZero;
    if (s < s_min || s > s_max || t < t_min || t > t_max) return kZero;
    if ((s - s_min) % s_step != 0 || (t - t_min) % t_step != 0) return kZero;
    std::size_t si = static_cast<std::size_t>((s - s_min) / s_step);
    std::size_t ti = static_cast<std::size_t>((t - t_min) / t_step);
    return cells_[si * t_dim() + ti];
}

mpz_class JointSumTable::total() const {
    mpz_class t;
    mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(2 * N), static_cast<unsigned long>(n + 1));
    return t;
}

mpz_class JointSumTable::sum_all() const {
    mpz_class s = 0;
    for (const auto& c : cells_) s += c;
    return s;
}

JointSumTable::Sup JointSumTable::sup() const {
    Sup best;
    best.count = 0;
    for (std::size_t si = 0; si < s_dim(); ++si)
        for (std::size_t ti = 0; ti < t_dim(); ++ti) {
            const mpz_class& c = cells_[si * t_dim() + ti];
            if (c > best.count) {
                best.count = c;
                best.s = s_min + static_cast<long>(si) * s_step;
                best.t = t_min + static_cast<long>(ti) * t_step;
            }
        }
    return best;
}

JointTableBuilder::JointTableBuilder(int N, JointWeights w, JointGuard guard) : guard_(guard) {
    if (N < 1) throw std::invalid_argument("JointTableBuilder: N >= 1");
    table_.N = N;
    table_.weights = w;
    table_.n = -1;
    table_.cells_.assign(1, mpz_class(1)); // empty product at (0,0)
    table_.s_min = table_.s_max = 0;
    table_.t_min = table_.t_max = 0;
    table_.s_step = table_.t_step = 1;
}

void JointTableBuilder::absorb(int i) {
    if (i <= last_index_) throw std::invalid_argument("JointTableBuilder: indices must increase");
    last_index_ = i;
    const int N = table_.N;
    const long w = joint_weight(table_.weights, i);
    const long aw = w < 0 ? -w : w;

    JointSumTable next;
    next.n = i;
    next.N = N;
    next.weights = table_.weights;
    next.s_min = table_.s_min - N;
    next.s_max = table_.s_max + N;
    next.t_min = table_.t_min - aw * N;
    next.t_max = table_.t_max + aw * N;
    // For N == 1 both coordinates live on fixed parities (s: item count mod 2,
    // t: sum of |w_i| mod 2) and the mins above land on them, so the lattice
    // step stays 2.  Larger N mixes parities.
    next.s_step = N == 1 ? 2 : 1;
    next.t_step = N == 1 ? 2 : 1;

    const std::size_t sd = static_cast<std::size_t>((next.s_max - next.s_min) / next.s_step) + 1;
    const std::size_t td = static_cast<std::size_t>((next.t_max - next.t_min) / next.t_step) + 1;
    if (sd * td > guard_.max_cells)
        throw ResourceError("joint table would need " + std::to_string(sd * td) +
                            " cells; raise the guard or use the CLT approximation");
    next.cells_.assign(sd * td, mpz_class(0));

    const std::size_t old_td = table_.t_dim();
    for (std::size_t si = 0; si < table_.s_dim(); ++si) {
        long s = table_.s_min + static_cast<long>(si) * table_.s_step;
        for (std::size_t ti = 0; ti < old_td; ++ti) {
            const mpz_class& c = table_.cells_[si * old_td + ti];
            if (c == 0) continue;
            long t = table_.t_min + static_cast<long>(ti) * table_.t_step;
            for (int v = -N; v <= N; ++v) {
                if (v == 0) continue;
                long s2 = s + v;
                long t2 = t + w * v;
                std::size_t si2 = static_cast<std::size_t>((s2 - next.s_min) / next.s_step);
                std::size_t ti2 = static_cast<std::size_t>((t2 - next.t_min) / next.t_step);
                mpz_class& dst = next.cells_[si2 * td + ti2];
                mpz_add(dst.get_mpz_t(), dst.get_mpz_t(), c.get_mpz_t());
            }
        }
    }
    table_ = std::move(next);
}

JointSumTable build_joint_table(int n, int N, JointWeights w, const JointGuard& guard) {
    if (n < 0) throw std::invalid_argument("build_joint_table: n >= 0 required");
    JointTableBuilder b(N, w, guard);
    for (int i = 0; i <= n; ++i) b.absorb(i);
    return b.table();
}

void joint_prefix_scan(int n_max, int N, JointWeights w,
                       const std::function<void(int, const JointSumTable&)>& cb,
                       const JointGuard& guard) {
    JointTableBuilder b(N, w, guard);
    for (int i = 0; i <= n_max; ++i) {
        b.absorb(i);
        cb(i, b.table());
    }
}

mpq_class anticonc_sup(int n, int N, JointWeights w, const JointGuard& guard) {
    JointSumTable t = build_joint_table(n, N, w, guard);
    mpq_class p(t.sup().count, t.total());
    p.canonicalize();
    return p;
}

std::string joint_table_cache_name(int n, int N, JointWeights w) {
    return std::string("joint_") + (w == JointWeights::U ? "u" : "v") + "_n" + std::to_string(n) +
           "_N" + std::to_string(N) + ".kjt";
}

void save_joint_table(const JointSumTable& t, const std::string& dir) {
    std::string path = dir + "/" + joint_table_cache_name(t.n, t.N, t.weights);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("save_joint_table: cannot open " + path);
    t.serialize(os);
}

JointSumTable load_joint_table(const std::string& dir, int n, int N, JointWeights w) {
    std::string path = dir + "/" + joint_table_cache_name(n, N, w);
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("load_joint_table: cannot open " + path);
    JointSumTable t = JointSumTable::deserialize(is);
    if (t.n != n || t.N != N || t.weights != w)
        throw std::runtime_error("load_joint_table: cache key mismatch in " + path);
    return t;
}

namespace {

void put_u64(std::ostream& os, std::uint64_t v) {
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(buf), 8);
}

std::uint64_t get_u64(std::istream& is) {
    unsigned char buf[8];
    is.read(reinterpret_cast<char*>(buf), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    return v;
}

void put_varint(std::ostream& os, std::uint64_t v) {
    while (v >= 0x80) {
        os.put(static_cast<char>((v & 0x7F) | 0x80));
        v >>= 7;
    }
    os.put(static_cast<char>(v));
}

std::uint64_t get_varint(std::istream& is) {
    std::uint64_t v = 0;
    int shift = 0;
    for (;;) {
        int c = is.get();
        if (c == EOF) throw std::runtime_error("joint table cache: truncated varint");
        v |= static_cast<std::uint64_t>(c & 0x7F) << shift;
        if (!(c & 0x80)) break;
        shift += 7;
    }
    return v;
}

} // namespace

void JointSumTable::serialize(std::ostream& os) const {
    os.write("KJT1", 4);
    put_u64(os, static_cast<std::uint64_t>(n));
    put_u64(os, static_cast<std::uint64_t>(N));
    put_u64(os, weights == JointWeights::U ? 0 : 1);
    for (long v : {s_min, s_max, s_step, t_min, t_max, t_step})
        put_u64(os, static_cast<std::uint64_t>(v));
    for (const auto& c : cells_) {
        std::size_t bytes = (mpz_sizeinbase(c.get_mpz_t(), 2) + 7) / 8;
        if (c == 0) bytes = 0;
        put_varint(os, bytes);
        if (bytes) {
            std::vector<unsigned char> buf(bytes);
            std::size_t written = 0;
            mpz_export(buf.data(), &written, -1, 1, 0, 0, c.get_mpz_t());
            os.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(written));
        }
    }
}

JointSumTable JointSumTable::deserialize(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::string(magic, 4) != "KJT1")
        throw std::runtime_error("joint table cache: bad magic");
    JointSumTable t;
    t.n = static_cast<int>(get_u64(is));
    t.N = static_cast<int>(get_u64(is));
    t.weights = get_u64(is) == 0 ? JointWeights::U : JointWeights::V;
    long* fields[6] = {&t.s_min, &t.s_max, &t.s_step, &t.t_min, &t.t_max, &t.t_step};
    for (long* f : fields) *f = static_cast<long>(get_u64(is));
    t.cells_.assign(t.s_dim() * t.t_dim(), mpz_class(0));
    for (auto& c : t.cells_) {
        std::uint64_t bytes = get_varint(is);
        if (bytes) {
            std::vector<unsigned char> buf(bytes);
            is.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(bytes));
            if (!is) throw std::runtime_error("joint table cache: truncated cell");
            mpz_import(c.get_mpz_t(), bytes, -1, 1, 0, 0, buf.data());
        }
    }
    return t;
}

} // namespace kac
