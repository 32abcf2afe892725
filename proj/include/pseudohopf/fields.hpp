#pragma once

#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

namespace pseudohopf {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

// Dense bivariate polynomial: coeff(i, j) multiplies x^i y^j.
class Poly2 {
public:
    Poly2() = default;
    // Rows index the power of x, columns the power of y. Rows must share a length.
    explicit Poly2(std::vector<std::vector<double>> table);
    Poly2(std::initializer_list<std::vector<double>> rows) : Poly2(std::vector<std::vector<double>>(rows)) {}

    static Poly2 constant(double c) { return Poly2(std::vector<std::vector<double>>{{c}}); }

    double operator()(double x, double y) const;
    double operator()(Point p) const { return (*this)(p.x, p.y); }

    double coeff(int i, int j) const;
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    // Largest i + j over nonzero coefficients (0 for the zero polynomial).
    int degree() const;
    const std::vector<std::vector<double>>& table() const { return table_; }

    // Substitute y -> -y.
    Poly2 reflect_y() const;
    Poly2 operator-() const;

private:
    std::vector<std::vector<double>> table_;
    int rows_ = 0;
    int cols_ = 0;
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

class PlanarField {
public:
    PlanarField() = default;
    PlanarField(Poly2 p, Poly2 q);

    Vec2 operator()(Point pt) const { return {p_(pt), q_(pt)}; }
    const Poly2& P() const { return p_; }
    const Poly2& Q() const { return q_; }
    int max_degree() const { return max_degree_; }

    // Mirror image under (x, y) -> (x, -y): maps lower half-plane orbits to the upper one.
    PlanarField reflected() const;

private:
    Poly2 p_, q_;
    int max_degree_ = 0;
};

Vec2 eval_field(const PlanarField& field, Point p);

enum class ComponentKind {
    Fold,
    EFocus,
    NFocus,
    Cusp,
    PeriodicOrbit,
    PolycycleTangential,
    PolycycleSingular,
};

enum class Validation { Unchecked, Valid, NoCheckAvailable };

// Declared local type of a component at the origin plus its parameters.
struct ComponentClass {
    ComponentKind kind = ComponentKind::Fold;
    int multiplicity = 2;          // Fold: contact order 2k
    int n = 1;                     // NFocus degree n; Cusp index n; PeriodicOrbit contact 2n
    bool andreev_case_ii = false;  // NFocus monodromy case
    double a = 1.0;                // NFocus: leading coefficient of f(x)
    double b = 0.0;                // NFocus: coefficient of the x^(n-1) y term (case ii)
    int beta = 0;                  // NFocus: order of g(x)
    double graphic_number = 1.0;   // PolycycleTangential r
    double ratio = 1.0;            // PolycycleSingular R
    std::optional<double> period;  // PeriodicOrbit: period of the orbit
    Validation validation = Validation::Unchecked;

    static ComponentClass fold(int multiplicity = 2);
    static ComponentClass efocus();
    static ComponentClass nfocus(int n, double a, double b = 0.0, int beta = 0, bool case_ii = false);
    static ComponentClass cusp(int n = 1);
    static ComponentClass periodic_orbit(int contact_n = 1, std::optional<double> period = {});
    static ComponentClass polycycle(double r);
    static ComponentClass polycycle_singular(double ratio);

    // Throws InvalidArgument when a parameter invariant is violated.
    void validate() const;
};

std::string to_string(ComponentKind kind);
ComponentKind component_kind_from_string(const std::string& name);
std::string to_string(Validation v);
// Short label used in table rows, e.g. "Fold", "N-focus".
std::string display_name(ComponentKind kind);

// Checks the declaration against the field's jet where a check exists.
ComponentClass classify_component(const PlanarField& field, ComponentClass declared);

}  // namespace pseudohopf
