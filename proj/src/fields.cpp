#include "pseudohopf/fields.hpp"

#include <cmath>
#include <map>

#include "pseudohopf/error.hpp"

namespace pseudohopf {

Poly2::Poly2(std::vector<std::vector<double>> table) : table_(std::move(table)) {
    rows_ = static_cast<int>(table_.size());
    cols_ = rows_ > 0 ? static_cast<int>(table_.front().size()) : 0;
    for (const auto& row : table_) {
        if (static_cast<int>(row.size()) != cols_)
            throw InvalidArgument("Poly2: coefficient table is not rectangular");
        for (double c : row)
            if (!std::isfinite(c)) throw InvalidArgument("Poly2: non-finite coefficient");
    }
}

double Poly2::operator()(double x, double y) const {
    double acc = 0.0;
    for (int i = rows_ - 1; i >= 0; --i) {
        const auto& row = table_[static_cast<size_t>(i)];
        double inner = 0.0;
        for (int j = cols_ - 1; j >= 0; --j) inner = inner * y + row[static_cast<size_t>(j)];
        acc = acc * x + inner;
    }
    return acc;
}

double Poly2::coeff(int i, int j) const {
    if (i < 0 || j < 0 || i >= rows_ || j >= cols_) return 0.0;
    return table_[static_cast<size_t>(i)][static_cast<size_t>(j)];
}

int Poly2::degree() const {
    int d = 0;
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            if (coeff(i, j) != 0.0) d = std::max(d, i + j);
    return d;
}

Poly2 Poly2::reflect_y() const {
    auto t = table_;
    for (auto& row : t)
        for (size_t j = 1; j < row.size(); j += 2) row[j] = -row[j];
    return Poly2(std::move(t));
}

Poly2 Poly2::operator-() const {
    auto t = table_;
    for (auto& row : t)
        for (double& c : row) c = -c;
    return Poly2(std::move(t));
}

PlanarField::PlanarField(Poly2 p, Poly2 q) : p_(std::move(p)), q_(std::move(q)) {
    max_degree_ = std::max(p_.degree(), q_.degree());
}

PlanarField PlanarField::reflected() const { return {p_.reflect_y(), -q_.reflect_y()}; }

Vec2 eval_field(const PlanarField& field, Point p) { return field(p); }

ComponentClass ComponentClass::fold(int multiplicity) {
    ComponentClass c;
    c.kind = ComponentKind::Fold;
    c.multiplicity = multiplicity;
    c.validate();
    return c;
}

ComponentClass ComponentClass::efocus() {
    ComponentClass c;
    c.kind = ComponentKind::EFocus;
    return c;
}

ComponentClass ComponentClass::nfocus(int n, double a, double b, int beta, bool case_ii) {
    ComponentClass c;
    c.kind = ComponentKind::NFocus;
    c.n = n;
    c.a = a;
    c.b = b;
    c.beta = beta;
    c.andreev_case_ii = case_ii;
    c.validate();
    return c;
}

ComponentClass ComponentClass::cusp(int n) {
    ComponentClass c;
    c.kind = ComponentKind::Cusp;
    c.n = n;
    c.validate();
    return c;
}

ComponentClass ComponentClass::periodic_orbit(int contact_n, std::optional<double> period) {
    ComponentClass c;
    c.kind = ComponentKind::PeriodicOrbit;
    c.n = contact_n;
    c.period = period;
    c.validate();
    return c;
}

ComponentClass ComponentClass::polycycle(double r) {
    ComponentClass c;
    c.kind = ComponentKind::PolycycleTangential;
    c.graphic_number = r;
    c.validate();
    return c;
}

ComponentClass ComponentClass::polycycle_singular(double ratio) {
    ComponentClass c;
    c.kind = ComponentKind::PolycycleSingular;
    c.ratio = ratio;
    c.validate();
    return c;
}

void ComponentClass::validate() const {
    switch (kind) {
        case ComponentKind::Fold:
            if (multiplicity < 2 || multiplicity % 2 != 0)
                throw InvalidArgument("Fold multiplicity must be even and >= 2");
            break;
        case ComponentKind::NFocus:
            if (n < 2) throw InvalidArgument("NFocus requires n >= 2");
            if (!(a > 0.0)) throw InvalidArgument("NFocus requires a > 0");
            if (andreev_case_ii && !(b * b - 4.0 * a * n < 0.0))
                throw InvalidArgument("NFocus case (ii) requires b^2 - 4an < 0");
            break;
        case ComponentKind::Cusp:
            if (n < 1) throw InvalidArgument("Cusp requires n >= 1");
            break;
        case ComponentKind::PeriodicOrbit:
            if (n < 1) throw InvalidArgument("PeriodicOrbit contact index must be >= 1");
            if (period && !(*period > 0.0)) throw InvalidArgument("PeriodicOrbit period must be positive");
            break;
        case ComponentKind::PolycycleTangential:
            if (!(graphic_number > 0.0)) throw InvalidArgument("Polycycle graphic number must be positive");
            break;
        case ComponentKind::PolycycleSingular:
            if (!(ratio > 0.0)) throw InvalidArgument("Polycycle ratio must be positive");
            break;
        case ComponentKind::EFocus:
            break;
    }
}

namespace {

const std::map<ComponentKind, std::string>& kind_names() {
    static const std::map<ComponentKind, std::string> names = {
        {ComponentKind::Fold, "fold"},
        {ComponentKind::EFocus, "efocus"},
        {ComponentKind::NFocus, "nfocus"},
        {ComponentKind::Cusp, "cusp"},
        {ComponentKind::PeriodicOrbit, "periodic_orbit"},
        {ComponentKind::PolycycleTangential, "polycycle"},
        {ComponentKind::PolycycleSingular, "polycycle_singular"},
    };
    return names;
}

bool nilpotent_nonzero(const PlanarField& f) {
    const double a10 = f.P().coeff(1, 0), a01 = f.P().coeff(0, 1);
    const double b10 = f.Q().coeff(1, 0), b01 = f.Q().coeff(0, 1);
    const bool zero = a10 == 0.0 && a01 == 0.0 && b10 == 0.0 && b01 == 0.0;
    return !zero && a10 + b01 == 0.0 && a10 * b01 - a01 * b10 == 0.0;
}

void require(bool ok, const std::string& what) {
    if (!ok) throw ClassificationError(what);
}

}  // namespace

std::string to_string(ComponentKind kind) { return kind_names().at(kind); }

ComponentKind component_kind_from_string(const std::string& name) {
    for (const auto& [k, v] : kind_names())
        if (v == name) return k;
    throw ConfigError("unknown component kind: " + name);
}

std::string to_string(Validation v) {
    switch (v) {
        case Validation::Valid: return "valid";
        case Validation::NoCheckAvailable: return "no_check";
        case Validation::Unchecked: break;
    }
    return "unchecked";
}

std::string display_name(ComponentKind kind) {
    switch (kind) {
        case ComponentKind::Fold: return "Fold";
        case ComponentKind::EFocus: return "E-focus";
        case ComponentKind::NFocus: return "N-focus";
        case ComponentKind::Cusp: return "Cusp";
        case ComponentKind::PeriodicOrbit: return "P. orbit";
        case ComponentKind::PolycycleTangential: return "Polycycle";
        case ComponentKind::PolycycleSingular: return "Polycycle (singular)";
    }
    return "?";
}

ComponentClass classify_component(const PlanarField& field, ComponentClass declared) {
    declared.validate();
    const Poly2& P = field.P();
    const Poly2& Q = field.Q();
    switch (declared.kind) {
        case ComponentKind::Fold: {
            const int top = declared.multiplicity - 1;
            const double a00 = P.coeff(0, 0);
            require(a00 != 0.0, "fold: P(0,0) must be nonzero");
            require(Q.coeff(0, 0) == 0.0, "fold: Q(0,0) must vanish");
            for (int i = 1; i < top; ++i)
                require(Q.coeff(i, 0) == 0.0, "fold: contact order lower than declared");
            require(Q.coeff(top, 0) != 0.0, "fold: contact order higher than declared");
            require(a00 * Q.coeff(top, 0) < 0.0, "fold: contact is visible (a00*b_{2k-1,0} >= 0)");
            declared.validation = Validation::Valid;
            break;
        }
        case ComponentKind::EFocus: {
            require(P.coeff(0, 0) == 0.0 && Q.coeff(0, 0) == 0.0, "efocus: origin is not an equilibrium");
            const double a10 = P.coeff(1, 0), a01 = P.coeff(0, 1);
            const double b10 = Q.coeff(1, 0), b01 = Q.coeff(0, 1);
            require((a10 - b01) * (a10 - b01) + 4.0 * a01 * b10 < 0.0,
                    "efocus: linear part is not of focus type");
            declared.validation = Validation::Valid;
            break;
        }
        case ComponentKind::NFocus: {
            require(P.coeff(0, 0) == 0.0 && Q.coeff(0, 0) == 0.0, "nfocus: origin is not an equilibrium");
            require(nilpotent_nonzero(field), "nfocus: linear part is not nilpotent and nonzero");
            const int top = 2 * declared.n - 1;
            for (int i = 1; i < top; ++i)
                require(Q.coeff(i, 0) == 0.0, "nfocus: Q(x,0) has a lower-order term than x^(2n-1)");
            require(std::abs(Q.coeff(top, 0) - declared.a) <= 1e-12 * std::max(1.0, std::abs(declared.a)),
                    "nfocus: coefficient of x^(2n-1) in Q differs from declared a");
            declared.validation = Validation::Valid;
            break;
        }
        case ComponentKind::Cusp:
            require(P.coeff(0, 0) == 0.0 && Q.coeff(0, 0) == 0.0, "cusp: origin is not an equilibrium");
            require(nilpotent_nonzero(field), "cusp: linear part is not nilpotent and nonzero");
            declared.validation = Validation::Valid;
            break;
        case ComponentKind::PeriodicOrbit:
            require(P.coeff(0, 0) != 0.0 && Q.coeff(0, 0) == 0.0,
                    "periodic_orbit: origin must be a regular tangency point");
            declared.validation = Validation::NoCheckAvailable;
            break;
        case ComponentKind::PolycycleTangential:
        case ComponentKind::PolycycleSingular:
            throw ClassificationError("polycycle components are available as model providers only");
    }
    return declared;
}

}  // namespace pseudohopf
