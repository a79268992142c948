#include "latflow/maps.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace latflow {

void PolyXY::add(int a, int b, GaussianRational c) {
    if (a < 0 || b < 0) throw std::invalid_argument("negative exponent");
    auto& slot = terms[{a, b}];
    slot = slot + c;
    if (slot.is_zero()) terms.erase({a, b});
}

std::complex<double> PolyXY::eval(double x, double y) const {
    std::complex<double> s(0, 0);
    for (const auto& [mono, c] : terms) {
        double v = 1;
        for (int i = 0; i < mono.first; ++i) v *= x;
        for (int i = 0; i < mono.second; ++i) v *= y;
        s += std::complex<double>(c.re.convert_to<double>(), c.im.convert_to<double>()) * v;
    }
    return s;
}

GaussianRational PolyXY::eval_exact(const Rational& x, const Rational& y) const {
    GaussianRational s;
    for (const auto& [mono, c] : terms) {
        Rational v = 1;
        for (int i = 0; i < mono.first; ++i) v *= x;
        for (int i = 0; i < mono.second; ++i) v *= y;
        s = s + c * GaussianRational(v);
    }
    return s;
}

bool AnalyticMap::analytic() const {
    for (const auto& comp : components) {
        // collect monomials where a derivative term could land
        std::map<Monomial, GaussianRational> dbar;
        for (const auto& [mono, c] : comp.terms) {
            auto [a, b] = mono;
            if (a > 0) {
                auto& slot = dbar[{a - 1, b}];
                slot = slot + GaussianRational(Rational(a)) * c;
            }
            if (b > 0) {
                auto& slot = dbar[{a, b - 1}];
                slot = slot + GaussianRational(Rational(0), Rational(b)) * c;
            }
        }
        for (const auto& [mono, c] : dbar)
            if (!c.is_zero()) return false;
    }
    return true;
}

std::vector<std::complex<double>> AnalyticMap::eval(double x, double y) const {
    std::vector<std::complex<double>> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = components[i].eval(x, y);
    return out;
}

std::vector<GaussianRational> AnalyticMap::eval_exact(const Rational& x,
                                                      const Rational& y) const {
    std::vector<GaussianRational> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = components[i].eval_exact(x, y);
    return out;
}

AnalyticMap mahler_curve(std::size_t n) {
    if (n < 1) throw std::invalid_argument("mahler curve needs n >= 1");
    AnalyticMap f;
    f.n = n;
    f.components.resize(n);
    // z^k expanded over x^a y^b with Gaussian-integer binomial coefficients
    for (std::size_t k = 1; k <= n; ++k) {
        for (std::size_t j = 0; j <= k; ++j) {
            Int binom = binomial(k, j);
            // i^j cycle
            GaussianRational c;
            switch (j % 4) {
                case 0: c = GaussianRational(Rational(binom)); break;
                case 1: c = GaussianRational(Rational(0), Rational(binom)); break;
                case 2: c = GaussianRational(Rational(-binom)); break;
                default: c = GaussianRational(Rational(0), Rational(-binom)); break;
            }
            f.components[k - 1].add(int(k - j), int(j), c);
        }
    }
    return f;
}

AnalyticMap line_iz() {
    AnalyticMap f;
    f.n = 2;
    f.components.resize(2);
    f.components[0].add(1, 0, GaussianRational(1));
    f.components[0].add(0, 1, GaussianRational(0, 1));
    f.components[1].add(1, 0, GaussianRational(0, 1));
    f.components[1].add(0, 1, GaussianRational(-1));
    return f;
}

AnalyticMap nonextremal_example() {
    AnalyticMap f;
    f.n = 2;
    f.components.resize(2);
    f.components[0].add(1, 0, GaussianRational(1));
    f.components[0].add(0, 1, GaussianRational(0, 1));
    // z (x^2 + y^2) = (x^3 + x y^2) + i (x^2 y + y^3)
    f.components[1].add(3, 0, GaussianRational(1));
    f.components[1].add(1, 2, GaussianRational(1));
    f.components[1].add(2, 1, GaussianRational(0, 1));
    f.components[1].add(0, 3, GaussianRational(0, 1));
    return f;
}

namespace {

// rows: the constant function 1, then each component; columns indexed by the
// union of monomials
std::vector<Monomial> all_monomials(const AnalyticMap& f) {
    std::map<Monomial, bool> seen;
    seen[{0, 0}] = true;
    for (const auto& comp : f.components)
        for (const auto& [mono, c] : comp.terms) seen[mono] = true;
    std::vector<Monomial> out;
    for (const auto& [mono, b] : seen) out.push_back(mono);
    return out;
}

}  // namespace

bool independent_over_reals(const AnalyticMap& f) {
    auto monos = all_monomials(f);
    std::size_t m = monos.size();
    // real coefficients c: the relation must vanish in both the real and the
    // imaginary coefficient system, so stack them as extra columns
    RationalMatrix mat(f.n + 1, 2 * m);
    for (std::size_t j = 0; j < m; ++j)
        if (monos[j] == Monomial{0, 0}) mat(0, j) = 1;
    for (std::size_t i = 0; i < f.n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            auto it = f.components[i].terms.find(monos[j]);
            if (it == f.components[i].terms.end()) continue;
            mat(i + 1, j) = it->second.re;
            mat(i + 1, m + j) = it->second.im;
        }
    return rank(std::move(mat)) == f.n + 1;
}

bool independent_over_complexes(const AnalyticMap& f) {
    auto monos = all_monomials(f);
    std::size_t m = monos.size();
    MatrixT<GaussianRational> mat(f.n + 1, m);
    for (std::size_t j = 0; j < m; ++j)
        if (monos[j] == Monomial{0, 0}) mat(0, j) = GaussianRational(1);
    for (std::size_t i = 0; i < f.n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            auto it = f.components[i].terms.find(monos[j]);
            if (it != f.components[i].terms.end()) mat(i + 1, j) = it->second;
        }
    return rank(std::move(mat)) == f.n + 1;
}

namespace {

std::string rational_str(const Rational& r) {
    std::ostringstream os;
    os << numerator(r);
    if (denominator(r) != 1) os << '/' << denominator(r);
    return os.str();
}

Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(Int(s));
    return Rational(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
}

}  // namespace

std::string serialize_map(const AnalyticMap& f) {
    std::ostringstream os;
    os << "n " << f.n << "\n";
    for (std::size_t i = 0; i < f.n; ++i) {
        os << "component " << i << "\n";
        for (const auto& [mono, c] : f.components[i].terms)
            os << "term " << mono.first << " " << mono.second << " " << rational_str(c.re)
               << " " << rational_str(c.im) << "\n";
    }
    return os.str();
}

AnalyticMap parse_map(const std::string& text) {
    AnalyticMap f;
    std::istringstream is(text);
    std::string word;
    long current = -1;
    while (is >> word) {
        if (word == "n") {
            if (!(is >> f.n) || f.n < 1) throw std::runtime_error("bad map header");
            f.components.assign(f.n, PolyXY{});
        } else if (word == "component") {
            if (!(is >> current) || current < 0 || std::size_t(current) >= f.n)
                throw std::runtime_error("bad component index");
        } else if (word == "term") {
            int a, b;
            std::string re, im;
            if (current < 0 || !(is >> a >> b >> re >> im))
                throw std::runtime_error("bad term line");
            f.components[current].add(a, b, {parse_rational(re), parse_rational(im)});
        } else if (!word.empty() && word[0] == '#') {
            std::string rest;
            std::getline(is, rest);
        } else {
            throw std::runtime_error("unrecognized map token: " + word);
        }
    }
    if (f.n == 0) throw std::runtime_error("map file missing dimension header");
    return f;
}

AnalyticMap load_map_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open map file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_map(buf.str());
}

void save_map_file(const AnalyticMap& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write map file: " + path);
    out << serialize_map(f);
}

std::vector<std::string> builtin_map_names() {
    return {"mahler2", "mahler3", "mahler4", "line_iz", "nonextremal"};
}

AnalyticMap builtin_map(const std::string& name) {
    if (name == "mahler1") return mahler_curve(1);
    if (name == "mahler2") return mahler_curve(2);
    if (name == "mahler3") return mahler_curve(3);
    if (name == "mahler4") return mahler_curve(4);
    if (name == "line_iz") return line_iz();
    if (name == "nonextremal") return nonextremal_example();
    throw std::runtime_error("unknown builtin map: " + name);
}

}  // namespace latflow
