#include "page_entropy/dimensions.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace page_entropy {

namespace {

std::size_t effective_cap(const LocalModel& model, std::size_t V, std::size_t N_cap) {
    if (model.is_finite()) return std::min(N_cap, V * *model.n_max());
    return N_cap;
}

std::vector<BigDim> site_sequence(const LocalModel& model, std::size_t cap) {
    auto a = model.coefficients(cap + 1);
    while (a.size() > 1 && a.back().is_zero()) a.pop_back();
    return a;
}

}  // namespace

std::string DimensionTable::to_csv() const {
    std::ostringstream os;
    os << "N,d_N\n";
    for (std::size_t N = 0; N < entries.size(); ++N) os << N << ',' << entries[N].to_string() << '\n';
    return os.str();
}

std::vector<BigDim> truncated_product(const std::vector<BigDim>& a, const std::vector<BigDim>& b, std::size_t cap) {
    if (a.empty() || b.empty()) return {};
    const std::size_t size = std::min(cap + 1, a.size() + b.size() - 1);
    std::vector<mpz_class> acc(size);
    for (std::size_t i = 0; i < a.size() && i < size; ++i) {
        if (a[i].is_zero()) continue;
        const mpz_class& ai = a[i].raw();
        for (std::size_t j = 0; j < b.size() && i + j < size; ++j) {
            if (b[j].is_zero()) continue;
            mpz_addmul(acc[i + j].get_mpz_t(), ai.get_mpz_t(), b[j].raw().get_mpz_t());
        }
    }
    std::vector<BigDim> out;
    out.reserve(size);
    for (auto& x : acc) out.emplace_back(std::move(x));
    return out;
}

DimensionTable dim_table(const LocalModel& model, std::size_t V, std::size_t N_cap) {
    const std::size_t cap = effective_cap(model, V, N_cap);
    std::vector<BigDim> result{BigDim(1)};
    std::vector<BigDim> base = site_sequence(model, cap);
    for (std::size_t e = V; e > 0; e >>= 1) {
        if (e & 1) result = truncated_product(result, base, cap);
        if (e > 1) base = truncated_product(base, base, cap);
    }
    result.resize(N_cap + 1);
    return DimensionTable{V, std::move(result)};
}

BigDim dim_fixed_n(const LocalModel& model, std::size_t V, std::size_t N) {
    if (model.is_finite() && N > V * *model.n_max()) return BigDim{};
    return dim_table(model, V, N).entries[N];
}

BigDim extended_binomial_closed(std::size_t V, std::size_t N, std::size_t n_max) {
    if (V == 0) return N == 0 ? BigDim(1) : BigDim{};
    if (N > V * n_max) return BigDim{};
    mpz_class sum = 0;
    for (std::size_t k = 0; k <= V && k * (n_max + 1) <= N; ++k) {
        mpz_class term = binomial(V, k).raw() * binomial(V + N - k * (n_max + 1) - 1, V - 1).raw();
        if (k % 2) sum -= term;
        else sum += term;
    }
    return BigDim(std::move(sum));
}

BigDim distinguishable_dim(std::size_t V, std::size_t N) {
    if (V == 0) throw std::invalid_argument("distinguishable_dim needs V >= 1");
    return pow(BigDim(V), N);
}

std::vector<DimensionTable> dim_ladder(const LocalModel& model, std::size_t V, std::size_t N_cap) {
    const std::vector<BigDim> site = site_sequence(model, N_cap);
    std::vector<DimensionTable> ladder;
    ladder.reserve(V + 1);
    std::vector<BigDim> current{BigDim(1)};
    for (std::size_t v = 0; v <= V; ++v) {
        if (v > 0) current = truncated_product(current, site, N_cap);
        DimensionTable t{v, current};
        t.entries.resize(N_cap + 1);
        ladder.push_back(std::move(t));
    }
    return ladder;
}

}  // namespace page_entropy
