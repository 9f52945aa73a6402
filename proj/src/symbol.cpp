#include "psido/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "psido/errors.hpp"

namespace psido {

// ---------------------------------------------------------------- TrigPoly

TrigPoly::TrigPoly(GaussRat constant) { add_term(0, constant); }

TrigPoly TrigPoly::monomial(int frequency, GaussRat coeff) {
    TrigPoly u;
    u.add_term(frequency, coeff);
    return u;
}

GaussRat TrigPoly::coeff(int frequency) const {
    auto it = coeffs_.find(frequency);
    return it == coeffs_.end() ? GaussRat() : it->second;
}

void TrigPoly::add_term(int frequency, const GaussRat& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = coeffs_.try_emplace(frequency, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) coeffs_.erase(it);
    }
}

std::complex<double> TrigPoly::evaluate(double theta) const {
    std::complex<double> sum = 0.0;
    for (const auto& [k, c] : coeffs_) sum += c.to_complex() * std::polar(1.0, k * theta);
    return sum;
}

TrigPoly TrigPoly::conj() const {
    TrigPoly out;
    for (const auto& [k, c] : coeffs_) out.add_term(-k, c.conj());
    return out;
}

TrigPoly TrigPoly::scaled(const GaussRat& c) const {
    if (c.is_zero()) return {};
    TrigPoly out;
    for (const auto& [k, v] : coeffs_) out.coeffs_.emplace(k, v * c);
    return out;
}

double TrigPoly::sup_bound() const {
    double m = 0.0;
    for (const auto& [k, c] : coeffs_) m = std::max(m, std::abs(c.to_complex()));
    return m * static_cast<double>(coeffs_.size());
}

TrigPoly& TrigPoly::operator+=(const TrigPoly& o) {
    for (const auto& [k, c] : o.coeffs_) add_term(k, c);
    return *this;
}

TrigPoly& TrigPoly::operator-=(const TrigPoly& o) {
    for (const auto& [k, c] : o.coeffs_) add_term(k, -c);
    return *this;
}

TrigPoly operator+(TrigPoly a, const TrigPoly& b) { return a += b; }
TrigPoly operator-(TrigPoly a, const TrigPoly& b) { return a -= b; }

TrigPoly tp_mul(const TrigPoly& a, const TrigPoly& b) {
    TrigPoly out;
    for (const auto& [ka, ca] : a.coeffs())
        for (const auto& [kb, cb] : b.coeffs()) out.add_term(ka + kb, ca * cb);
    return out;
}

std::string to_string(const TrigPoly& u) {
    if (u.is_zero()) return "0";
    std::string out;
    for (const auto& [k, c] : u.coeffs()) {
        std::string cs = to_string(c);
        bool compound = sgn(c.re) != 0 && sgn(c.im) != 0;
        std::string term;
        if (k == 0) {
            term = cs;
        } else {
            std::string e = k == 1 ? "e^{i*theta}" : k == -1 ? "e^{-i*theta}"
                                                            : "e^{" + std::to_string(k) + "i*theta}";
            if (compound)
                term = "(" + cs + ")*" + e;
            else if (cs == "1")
                term = e;
            else if (cs == "-1")
                term = "-" + e;
            else
                term = cs + "*" + e;
        }
        if (out.empty())
            out = term;
        else if (term[0] == '-')
            out += " - " + term.substr(1);
        else
            out += " + " + term;
    }
    return out;
}

// ------------------------------------------------------------ ShubinSymbol

double cutoff(double r) {
    if (r <= 0.5) return 0.0;
    if (r >= 1.0) return 1.0;
    double t = 2.0 * r - 1.0;
    return t * t * (3.0 - 2.0 * t);
}

namespace {

std::complex<double> ipow(std::complex<double> z, int n) {
    std::complex<double> out = 1.0;
    for (int j = 0; j < n; ++j) out *= z;
    return out;
}

bool polynomial_term(int j, int k) { return j >= 0 && std::abs(k) <= j && (j - k) % 2 == 0; }

// (x + i xi)^a (x - i xi)^b as {(p, q) -> coeff}.
std::map<std::pair<int, int>, GaussRat> z_power_monomials(int a, int b) {
    std::map<std::pair<int, int>, GaussRat> out;
    for (int s = 0; s <= a; ++s) {
        GaussRat cs = GaussRat(binomial(Rational(a), s)) * i_power(s);
        for (int t = 0; t <= b; ++t) {
            GaussRat ct = GaussRat(binomial(Rational(b), t)) * i_power(-t);
            auto key = std::make_pair(a - s + b - t, s + t);
            out[key] += cs * ct;
        }
    }
    return out;
}

}  // namespace

ShubinSymbol::ShubinSymbol(std::map<int, TrigPoly> components, std::optional<int> floor)
    : components_(std::move(components)), floor_(floor) {
    canonicalize();
}

void ShubinSymbol::canonicalize() {
    for (auto it = components_.begin(); it != components_.end();) {
        bool below = floor_ && it->first < *floor_;
        it = (it->second.is_zero() || below) ? components_.erase(it) : std::next(it);
    }
    if (components_.empty()) floor_.reset();
}

ShubinSymbol ShubinSymbol::constant(GaussRat c) { return monomial(0, 0, std::move(c)); }

ShubinSymbol ShubinSymbol::monomial(int degree, int frequency, GaussRat c) {
    std::map<int, TrigPoly> comps;
    comps[degree] = TrigPoly::monomial(frequency, std::move(c));
    return ShubinSymbol(std::move(comps));
}

ShubinSymbol ShubinSymbol::x() {
    return monomial(1, 1, frac(1, 2)) + monomial(1, -1, frac(1, 2));
}

ShubinSymbol ShubinSymbol::xi() {
    // r sin(theta) = r (e^{i theta} - e^{-i theta}) / 2i
    return monomial(1, 1, GaussRat(0, frac(-1, 2))) + monomial(1, -1, GaussRat(0, frac(1, 2)));
}

ShubinSymbol ShubinSymbol::polynomial_monomial(int p, int q, GaussRat c) {
    ShubinSymbol out = constant(std::move(c));
    ShubinSymbol xs = x(), xis = xi();
    for (int j = 0; j < p; ++j) out = sh_mul(out, xs);
    for (int j = 0; j < q; ++j) out = sh_mul(out, xis);
    return out;
}

ShubinSymbol ShubinSymbol::weight(int order, int depth) {
    // (1 + r^2)^s = r^{2s} sum_k C(s, k) r^{-2k}
    Rational s = frac(order, 2);
    std::map<int, TrigPoly> comps;
    bool finite = order >= 0 && order % 2 == 0;
    int terms = finite ? order / 2 : depth / 2;
    for (int k = 0; k <= terms; ++k) comps[order - 2 * k] = TrigPoly(GaussRat(binomial(s, k)));
    if (finite) return ShubinSymbol(std::move(comps));
    return ShubinSymbol(std::move(comps), order - depth);
}

int ShubinSymbol::order() const { return is_zero() ? kZeroOrder : components_.rbegin()->first; }

int ShubinSymbol::lowest_degree() const {
    if (is_zero()) return kZeroOrder;
    return floor_ ? *floor_ : components_.begin()->first;
}

int ShubinSymbol::depth() const { return is_zero() ? 0 : order() - lowest_degree(); }

TrigPoly ShubinSymbol::component(int degree) const {
    auto it = components_.find(degree);
    return it == components_.end() ? TrigPoly() : it->second;
}

std::vector<TrigPoly> ShubinSymbol::components() const {
    std::vector<TrigPoly> out;
    if (is_zero()) return out;
    for (int j = order(); j >= lowest_degree(); --j) out.push_back(component(j));
    return out;
}

std::complex<double> ShubinSymbol::evaluate(double x, double xi) const {
    double r = std::hypot(x, xi);
    double theta = std::atan2(xi, x);
    std::complex<double> z(x, xi);
    double chi = cutoff(r);
    std::complex<double> sum = 0.0;
    for (const auto& [j, u] : components_) {
        for (const auto& [k, c] : u.coeffs()) {
            if (polynomial_term(j, k)) {
                int a = (j + k) / 2, b = (j - k) / 2;
                sum += c.to_complex() * ipow(z, a) * ipow(std::conj(z), b);
            } else if (chi > 0.0) {
                sum += chi * c.to_complex() * std::pow(r, j) * std::polar(1.0, k * theta);
            }
        }
    }
    return sum;
}

bool ShubinSymbol::is_polynomial_class() const {
    if (!is_complete()) return false;
    for (const auto& [j, u] : components_)
        for (const auto& [k, c] : u.coeffs())
            if (!polynomial_term(j, k)) return false;
    return true;
}

std::map<std::pair<int, int>, GaussRat> ShubinSymbol::to_monomials() const {
    std::map<std::pair<int, int>, GaussRat> out;
    for (const auto& [j, u] : components_) {
        for (const auto& [k, c] : u.coeffs()) {
            if (!polynomial_term(j, k) || !is_complete())
                throw PreconditionError("component (" + std::to_string(j) + ", " + std::to_string(k) +
                                        ") is not a polynomial in (x, xi)");
            for (const auto& [pq, v] : z_power_monomials((j + k) / 2, (j - k) / 2)) out[pq] += c * v;
        }
    }
    std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
    return out;
}

int ShubinSymbol::total_degree() const { return is_zero() ? 0 : order(); }

ShubinSymbol ShubinSymbol::scaled(const GaussRat& c) const {
    if (c.is_zero()) return {};
    std::map<int, TrigPoly> comps;
    for (const auto& [j, u] : components_) comps.emplace(j, u.scaled(c));
    return ShubinSymbol(std::move(comps), floor_);
}

ShubinSymbol ShubinSymbol::truncated(int new_floor) const {
    int f = floor_ ? std::max(*floor_, new_floor) : new_floor;
    return ShubinSymbol(components_, f);
}

ShubinSymbol ShubinSymbol::conj() const {
    std::map<int, TrigPoly> comps;
    for (const auto& [j, u] : components_) comps.emplace(j, u.conj());
    return ShubinSymbol(std::move(comps), floor_);
}

namespace {

std::optional<int> max_floor(std::optional<int> a, std::optional<int> b) {
    if (!a) return b;
    if (!b) return a;
    return std::max(*a, *b);
}

}  // namespace

ShubinSymbol& ShubinSymbol::operator+=(const ShubinSymbol& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    for (const auto& [j, u] : o.components_) components_[j] += u;
    floor_ = max_floor(floor_, o.floor_);
    canonicalize();
    return *this;
}

ShubinSymbol& ShubinSymbol::operator-=(const ShubinSymbol& o) { return *this += o.scaled(GaussRat(-1)); }

ShubinSymbol operator+(ShubinSymbol a, const ShubinSymbol& b) { return a += b; }
ShubinSymbol operator-(ShubinSymbol a, const ShubinSymbol& b) { return a -= b; }

// ------------------------------------------------------------- operations

ShubinSymbol sh_derivative(const ShubinSymbol& s, Variable var) {
    // d_x  (r^j e^{ik t}) = r^{j-1} [ (j-k)/2 e^{i(k+1)t} + (j+k)/2 e^{i(k-1)t} ]
    // d_xi (r^j e^{ik t}) = r^{j-1} [ i(k-j)/2 e^{i(k+1)t} + i(j+k)/2 e^{i(k-1)t} ]
    std::map<int, TrigPoly> comps;
    for (const auto& [j, u] : s.nonzero_components()) {
        TrigPoly& out = comps[j - 1];
        for (const auto& [k, c] : u.coeffs()) {
            GaussRat up, down;
            if (var == Variable::x) {
                up = GaussRat(frac(j - k, 2));
                down = GaussRat(frac(j + k, 2));
            } else {
                up = GaussRat(Rational(0), frac(k - j, 2));
                down = GaussRat(Rational(0), frac(j + k, 2));
            }
            out.add_term(k + 1, c * up);
            out.add_term(k - 1, c * down);
        }
    }
    std::optional<int> floor;
    if (s.floor()) floor = *s.floor() - 1;
    return ShubinSymbol(std::move(comps), floor);
}

ShubinSymbol sh_mul(const ShubinSymbol& a, const ShubinSymbol& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::optional<int> floor;
    if (a.floor()) floor = max_floor(floor, *a.floor() + b.order());
    if (b.floor()) floor = max_floor(floor, *b.floor() + a.order());
    std::map<int, TrigPoly> comps;
    for (const auto& [ja, ua] : a.nonzero_components()) {
        for (const auto& [jb, ub] : b.nonzero_components()) {
            if (floor && ja + jb < *floor) continue;
            comps[ja + jb] += tp_mul(ua, ub);
        }
    }
    return ShubinSymbol(std::move(comps), floor);
}

ShubinSymbol kn_compose(const ShubinSymbol& a, const ShubinSymbol& b, std::optional<int> depth) {
    if (a.is_zero() || b.is_zero()) return {};
    if (depth && *depth < 0) throw PreconditionError("composition depth must be non-negative");
    constexpr int kMaxFullTerms = 64;
    const int top = a.order() + b.order();

    ShubinSymbol da = a, db = b, sum;
    bool terminated = false;
    for (int k = 0;; ++k) {
        sum += sh_mul(da, db).scaled(GaussRat(Rational(1) / factorial(k)));
        da = sh_derivative(da, Variable::xi);
        db = sh_derivative(db, Variable::x).scaled(-GaussRat::I());
        if (da.is_zero() || db.is_zero()) {
            terminated = true;
            break;
        }
        if (depth && k + 1 > *depth) break;
        if (!depth && k + 1 >= kMaxFullTerms)
            throw PreconditionError("full-depth composition does not terminate; pass an explicit depth");
    }
    if (!terminated) sum = sum.truncated(top - *depth);
    return sum;
}

TrigPoly sh_principal(const ShubinSymbol& s) { return s.is_zero() ? TrigPoly() : s.component(s.order()); }

// ---------------------------------------------------------- seminorm check

SampleGrid SampleGrid::standard() { return SampleGrid{{1.0, 1.5, 2.0, 5.0, 10.0, 1e2, 1e3, 1e4, 1e5}, 32}; }

CheckReport seminorm_check(const ShubinSymbol& s, int claimed_order, const SampleGrid& grid,
                           const SeminormOptions& options) {
    for (double r : grid.radii)
        if (!(r >= 1.0)) throw PreconditionError("seminorm grid contains a sample with r < 1");
    if (grid.angles < 1) throw PreconditionError("seminorm grid needs at least one angle");

    CheckReport report;
    report.pass = true;
    double worst_normalized = 0.0;
    std::string worst_where;
    for (int total = 0; total <= options.max_derivative_order; ++total) {
        for (int alpha = total; alpha >= 0; --alpha) {
            int beta = total - alpha;
            ShubinSymbol d = s;
            for (int j = 0; j < alpha; ++j) d = sh_derivative(d, Variable::x);
            for (int j = 0; j < beta; ++j) d = sh_derivative(d, Variable::xi);
            if (d.is_zero()) continue;

            double coeff_sum = 0.0;
            for (const auto& [j, u] : d.nonzero_components())
                for (const auto& [k, c] : u.coeffs()) coeff_sum += c.l1().get_d();
            int e = claimed_order - total;
            double bound = options.cap * coeff_sum * std::pow(2.0, std::max(0, -e) / 2.0);

            for (double r : grid.radii) {
                for (int t = 0; t < grid.angles; ++t) {
                    double theta = 2.0 * std::numbers::pi * t / grid.angles;
                    double x = r * std::cos(theta), xi = r * std::sin(theta);
                    double w = std::sqrt(1.0 + r * r);
                    double ratio = std::abs(d.evaluate(x, xi)) / std::pow(w, e);
                    report.worst_ratio = std::max(report.worst_ratio, ratio);
                    double normalized = ratio / bound;
                    if (normalized > worst_normalized) {
                        worst_normalized = normalized;
                        std::ostringstream where;
                        where << "d_x^" << alpha << " d_xi^" << beta << " at r=" << r;
                        worst_where = where.str();
                    }
                    if (ratio > bound * (1.0 + 1e-9)) report.pass = false;
                }
            }
        }
    }
    std::ostringstream detail;
    detail << "claimed order " << claimed_order << ", worst ratio " << report.worst_ratio
           << ", worst ratio/bound " << worst_normalized;
    if (!worst_where.empty()) detail << " (" << worst_where << ")";
    report.detail = detail.str();
    return report;
}

// ----------------------------------------------------------------- output

std::string to_string(const ShubinSymbol& s) {
    std::string out = "[";
    bool first = true;
    const auto& comps = s.nonzero_components();
    for (auto it = comps.rbegin(); it != comps.rend(); ++it) {
        for (const auto& [k, c] : it->second.coeffs()) {
            if (!first) out += ", ";
            first = false;
            out += "(" + std::to_string(it->first) + ", " + std::to_string(k) + ", " + to_string(c) + ")";
        }
    }
    return out + "]";
}

std::string to_polynomial_string(const ShubinSymbol& s) {
    auto monomials = s.to_monomials();
    if (monomials.empty()) return "0";
    std::vector<std::pair<std::pair<int, int>, GaussRat>> terms(monomials.begin(), monomials.end());
    std::stable_sort(terms.begin(), terms.end(), [](const auto& l, const auto& r) {
        int dl = l.first.first + l.first.second, dr = r.first.first + r.first.second;
        if (dl != dr) return dl > dr;
        return l.first.first > r.first.first;
    });
    std::string out;
    for (const auto& [pq, c] : terms) {
        auto [p, q] = pq;
        std::string mono;
        auto append = [&mono](const std::string& var, int power) {
            if (power == 0) return;
            if (!mono.empty()) mono += "*";
            mono += var;
            if (power > 1) mono += "^" + std::to_string(power);
        };
        append("x", p);
        append("xi", q);

        bool negative = false;
        std::string cs;
        if (sgn(c.im) == 0 || sgn(c.re) == 0) {
            negative = sgn(c.re) < 0 || (sgn(c.re) == 0 && sgn(c.im) < 0);
            cs = to_string(negative ? -c : c);
            if (cs == "1" && !mono.empty()) cs.clear();
        } else {
            cs = "(" + to_string(c) + ")";
        }
        std::string term = cs;
        if (!mono.empty()) term += (cs.empty() ? "" : "*") + mono;
        if (out.empty())
            out = (negative ? "-" : "") + term;
        else
            out += (negative ? " - " : " + ") + term;
    }
    return out;
}

}  // namespace psido
