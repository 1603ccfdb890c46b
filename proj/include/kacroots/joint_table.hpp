#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include <gmpxx.h>

#include "kacroots/errors.hpp"

namespace kac {

// Weight schemes for the two-dimensional coefficient sums:
//   U: u_i = (1, i)            -- (sum xi_i, sum i xi_i)
//   V: v_i = (1, (-1)^(i-1) i) -- the mirrored scheme used at -1
enum class JointWeights { U, V };

long joint_weight(JointWeights w, long i);

struct JointGuard {
    std::size_t max_cells = 80'000'000;
};

// Exact counts of coefficient vectors (xi_0..xi_n), xi in {+-1..+-N}, by the
// joint value (s, t) of the two weighted sums.  Storage is dense over the
// reachable lattice; for N = 1 both coordinates live on fixed parities and
// the grid uses step 2.
class JointSumTable {
public:
    int n = -1; // items 0..n absorbed so far (-1: empty product)
    int N = 1;
    JointWeights weights = JointWeights::U;

    long s_min = 0, s_max = 0, s_step = 1;
    long t_min = 0, t_max = 0, t_step = 1;

    const mpz_class& count(long s, long t) const;
    mpz_class total() const;   // (2N)^(n+1)
    mpz_class sum_all() const; // must equal total(): conservation

    struct Sup {
        mpz_class count;
        long s = 0, t = 0;
    };
    Sup sup() const;

    std::size_t cell_count() const { return cells_.size(); }

    void serialize(std::ostream& os) const;
    static JointSumTable deserialize(std::istream& is);

private:
    friend class JointTableBuilder;
    std::vector<mpz_class> cells_; // row-major: s index major, t index minor
    std::size_t t_dim() const { return static_cast<std::size_t>((t_max - t_min) / t_step) + 1; }
    std::size_t s_dim() const { return static_cast<std::size_t>((s_max - s_min) / s_step) + 1; }
};

// Incremental builder over an increasing index sequence; exposes the table
// after each absorbed index, which is what the sweeps over n consume.
class JointTableBuilder {
public:
    JointTableBuilder(int N, JointWeights w, JointGuard guard = {});

    // absorb index i (weight pair (1, w(i))); indices must increase
    void absorb(int i);

    const JointSumTable& table() const { return table_; }

private:
    JointGuard guard_;
    JointSumTable table_;
    int last_index_ = -1;
};

JointSumTable build_joint_table(int n, int N, JointWeights w, const JointGuard& guard = {});

// Sweep helper: absorbs indices 0..n_max and invokes cb(i, table) after each.
void joint_prefix_scan(int n_max, int N, JointWeights w,
                       const std::function<void(int, const JointSumTable&)>& cb,
                       const JointGuard& guard = {});

// max over (s,t) of P(sum xi_i w_i = (s,t)), as an exact rational
mpq_class anticonc_sup(int n, int N, JointWeights w, const JointGuard& guard = {});

// binary cache keyed by (n, N, weights): "<dir>/joint_{u|v}_n<j>_N<k>.kjt"
std::string joint_table_cache_name(int n, int N, JointWeights w);
void save_joint_table(const JointSumTable& t, const std::string& dir);
JointSumTable load_joint_table(const std::string& dir, int n, int N, JointWeights w);

} // namespace kac
