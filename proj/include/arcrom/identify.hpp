#pragma once

#include <memory>
#include <vector>

#include "arcrom/ecsw.hpp"
#include "arcrom/fe_model.hpp"
#include "arcrom/full_tensors.hpp"
#include "arcrom/tensor_set.hpp"
#include "arcrom/types.hpp"

namespace arcrom::ident {

/// One imposed-displacement case: q = amp_r v_r (+ amp_s v_s for pairs).
struct PlanCase {
    int r = 0;
    int s = -1;  // -1 for single-vector cases
    double amp_r = 0.0;
    double amp_s = 0.0;
    bool is_pair() const { return s >= 0; }
};

struct IdentificationPlan {
    int m = 0;
    double alpha_id = 0.0;
    Vec amplitudes;                // lambda_r per basis vector
    std::vector<PlanCase> cases;   // 2m singles (+/-) then m(m-1)/2 pairs
    int case_count() const { return static_cast<int>(cases.size()); }
};

/// Per vector r: amplitudes +/- lambda_r with lambda_r = alpha_id /
/// max |translational v_r|; per pair r < s one case at (lambda_r, lambda_s).
IdentificationPlan plan_displacements(const fe::FeModel& model, const Mat& v, double alpha_id);

/// Black-box surface used by the identification: the reduced linear
/// stiffness (projected once at setup) and the nonlinear reduced tangent
/// K~t - K~1 at an imposed full-space displacement. Implementations track
/// query counts, per-query element evaluations and phase timings.
class TangentProvider {
public:
    virtual ~TangentProvider() = default;

    virtual const Mat& reduced_linear() const = 0;
    Mat nonlinear_reduced_tangent(const Vec& q_full) {
        ++query_count_;
        return query(q_full);
    }

    long query_count() const { return query_count_; }
    long element_evaluations() const { return element_evaluations_; }
    /// Elements evaluated by a single tangent query.
    virtual int elements_per_query() const = 0;
    double fe_seconds() const { return fe_seconds_; }
    double reading_seconds() const { return reading_seconds_; }

protected:
    virtual Mat query(const Vec& q_full) = 0;

    long query_count_ = 0;
    long element_evaluations_ = 0;
    double fe_seconds_ = 0.0;
    double reading_seconds_ = 0.0;
};

/// Full-mesh assembly followed by projection (standard EED).
class ExactTangentProvider : public TangentProvider {
public:
    ExactTangentProvider(const fe::FeModel& model, const Mat& v);
    const Mat& reduced_linear() const override { return k1_reduced_; }
    int elements_per_query() const override { return model_.element_count(); }

protected:
    Mat query(const Vec& q_full) override;

private:
    const fe::FeModel& model_;
    Mat v_;
    SpMat k1_;
    Mat k1_reduced_;
};

/// EED-ECSW: queries a restricted model holding only the reduced-mesh
/// elements and weights the element tangent contributions.
class EcswTangentProvider : public TangentProvider {
public:
    EcswTangentProvider(const fe::FeModel& model, const ecsw::EcswModel& ecsw, const Mat& v);
    const Mat& reduced_linear() const override { return k1_reduced_; }
    int elements_per_query() const override { return restricted_.element_count(); }

protected:
    Mat query(const Vec& q_full) override;

private:
    fe::FeModel restricted_;
    Vec weights_;
    std::vector<Mat> v_e_;      // basis rows per restricted element
    std::vector<Mat6> k_lin_;   // element linear stiffness per restricted element
    Mat k1_reduced_;
};

/// EED tensor identification (per-entry 2x2 solves from +/- amplitude pairs,
/// then closed-form distinct-triple solves from the pair cases).
TensorSet identify_tensors(const Mat& v, const IdentificationPlan& plan,
                           TangentProvider& provider);

/// Direct projection of the full tensors onto V, folded to unique-monomial
/// storage (the intrusive oracle).
TensorSet direct_projection(const fe::FullTensors& full, const Mat& v);

/// Change of basis U = (V'V)^-1 V'W.
Mat compute_U(const Mat& v, const Mat& w);

/// Transformation of the reduced tensors under eta = U zeta, re-folded to
/// unique-monomial storage.
TensorSet transform_tensors(const TensorSet& tensors, const Mat& u);

/// Reduced tangent by full assembly and projection, V' K^t(q) V.
Mat reduced_tangent_exact(const fe::FeModel& model, const Mat& v, const Vec& q);

}  // namespace arcrom::ident
