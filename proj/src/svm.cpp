#include "lakeice/svm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

namespace lakeice {

std::vector<double> Standardizer::apply(const std::vector<double>& row) const {
    if (row.size() != mean.size())
        throw validation_error("svm: feature count mismatch (expected " +
                               std::to_string(mean.size()) + ", got " +
                               std::to_string(row.size()) + ")");
    std::vector<double> out(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) out[j] = (row[j] - mean[j]) / stddev[j];
    return out;
}

Standardizer Standardizer::fit(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw validation_error("svm: no training rows");
    const std::size_t d = rows.front().size();
    Standardizer s;
    s.mean.assign(d, 0.0);
    s.stddev.assign(d, 0.0);
    for (const auto& r : rows) {
        if (r.size() != d) throw validation_error("svm: ragged feature matrix");
        for (std::size_t j = 0; j < d; ++j) s.mean[j] += r[j];
    }
    for (double& m : s.mean) m /= double(rows.size());
    for (const auto& r : rows) {
        for (std::size_t j = 0; j < d; ++j) {
            const double dev = r[j] - s.mean[j];
            s.stddev[j] += dev * dev;
        }
    }
    for (double& v : s.stddev) {
        v = std::sqrt(v / double(rows.size()));
        if (v == 0.0) v = 1.0;  // constant column: leave centered values at zero
    }
    return s;
}

namespace {

double kernel_eval(SvmKernel kernel, double scale, const std::vector<double>& u,
                   const std::vector<double>& v) {
    if (kernel == SvmKernel::linear) {
        double dot = 0.0;
        for (std::size_t j = 0; j < u.size(); ++j) dot += u[j] * v[j];
        return dot;
    }
    double d2 = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        const double d = u[j] - v[j];
        d2 += d * d;
    }
    return std::exp(-d2 / (scale * scale));
}

}  // namespace

double SvmModel::decision_value(const std::vector<double>& raw_row) const {
    const std::vector<double> x = standardizer.apply(raw_row);
    double f = bias;
    for (std::size_t i = 0; i < support_vectors.size(); ++i) {
        f += dual_coeffs[i] * kernel_eval(kernel, kernel_scale, support_vectors[i], x);
    }
    return f;
}

SvmModel train_svm(const std::vector<std::vector<double>>& rows,
                   const std::vector<SvmLabel>& labels, const SvmTrainOptions& opts) {
    const std::size_t n = rows.size();
    if (n == 0 || labels.size() != n)
        throw validation_error("train_svm: rows/labels size mismatch or empty");
    bool has_pos = false, has_neg = false;
    for (SvmLabel l : labels) (l == SvmLabel::non_frozen ? has_pos : has_neg) = true;
    if (!has_pos || !has_neg)
        throw validation_error("train_svm: both classes must be present");

    SvmModel model;
    model.kernel = opts.kernel;
    model.kernel_scale = opts.kernel_scale;
    model.box_constraint = opts.box_constraint;
    model.standardizer = Standardizer::fit(rows);

    std::vector<std::vector<double>> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = model.standardizer.apply(rows[i]);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = double(std::int8_t(labels[i]));

    const double c_box = opts.box_constraint;
    std::vector<double> alpha(n, 0.0);
    // Gradient of the dual objective 1/2 a'Qa - e'a, with Q_ij = y_i y_j K_ij.
    std::vector<double> grad(n, -1.0);
    std::vector<double> qi(n), qj(n);

    auto kernel_row = [&](std::size_t i, std::vector<double>& out) {
        for (std::size_t k = 0; k < n; ++k) {
            out[k] = y[i] * y[k] * kernel_eval(opts.kernel, opts.kernel_scale, x[i], x[k]);
        }
    };

    const std::size_t max_iter = opts.max_iterations ? opts.max_iterations : 10000 * n;
    std::size_t iter = 0;
    double violation = 0.0;
    double up_max = 0.0, low_min = 0.0;
    while (true) {
        // Maximal violating pair; the first index wins ties.
        long i = -1, j = -1;
        up_max = -std::numeric_limits<double>::infinity();
        low_min = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < n; ++k) {
            const double v = -y[k] * grad[k];
            const bool in_up = (y[k] > 0 && alpha[k] < c_box) || (y[k] < 0 && alpha[k] > 0);
            const bool in_low = (y[k] > 0 && alpha[k] > 0) || (y[k] < 0 && alpha[k] < c_box);
            if (in_up && v > up_max) {
                up_max = v;
                i = long(k);
            }
            if (in_low && v < low_min) {
                low_min = v;
                j = long(k);
            }
        }
        violation = up_max - low_min;
        if (i < 0 || j < 0 || violation <= opts.kkt_tolerance) break;
        if (++iter > max_iter) {
            throw numeric_error("train_svm: SMO did not converge within " +
                                std::to_string(max_iter) + " iterations (violation " +
                                std::to_string(violation) + ")");
        }

        kernel_row(std::size_t(i), qi);
        kernel_row(std::size_t(j), qj);

        // Analytic step on the (i, j) pair, clipped to the box.
        const double denom = std::max(qi[i] + qj[j] - 2.0 * y[i] * y[j] * qi[j], 1e-12);
        double step = (-y[i] * grad[i] + y[j] * grad[j]) / denom;

        const double old_ai = alpha[i], old_aj = alpha[j];
        alpha[i] += y[i] * step;
        alpha[j] -= y[j] * step;

        const double total = y[i] * old_ai + y[j] * old_aj;
        alpha[i] = std::clamp(alpha[i], 0.0, c_box);
        alpha[j] = y[j] * (total - y[i] * alpha[i]);
        alpha[j] = std::clamp(alpha[j], 0.0, c_box);
        alpha[i] = y[i] * (total - y[j] * alpha[j]);

        const double dai = alpha[i] - old_ai;
        const double daj = alpha[j] - old_aj;
        for (std::size_t k = 0; k < n; ++k) grad[k] += qi[k] * dai + qj[k] * daj;
    }

    model.iterations = iter;
    model.kkt_residual = std::max(violation, 0.0);
    // KKT multiplier of the equality constraint: free support vectors satisfy
    // b = -y_k grad_k exactly, so the midpoint of the final violating pair is
    // the standard estimate.
    model.bias = 0.5 * (up_max + low_min);
    // Dual objective 1/2 a'Qa - e'a, using grad = Qa - e.
    double obj = 0.0;
    for (std::size_t k = 0; k < n; ++k) obj += 0.5 * alpha[k] * (grad[k] - 1.0);
    model.dual_objective = obj;

    for (std::size_t k = 0; k < n; ++k) {
        if (alpha[k] > 0.0) {
            model.support_vectors.push_back(x[k]);
            model.dual_coeffs.push_back(alpha[k] * y[k]);
        }
    }
    return model;
}

double decision_to_score(double decision_value) {
    return 100.0 / (1.0 + std::exp(-decision_value));
}

std::vector<double> predict_scores(const SvmModel& model,
                                   const std::vector<std::vector<double>>& rows) {
    std::vector<double> scores;
    scores.reserve(rows.size());
    for (const auto& row : rows) scores.push_back(decision_to_score(model.decision_value(row)));
    return scores;
}

std::string SvmModel::to_json() const {
    nlohmann::json j;
    j["kernel"] = kernel == SvmKernel::rbf ? "rbf" : "linear";
    j["kernel_scale"] = kernel_scale;
    j["box_constraint"] = box_constraint;
    j["mean"] = standardizer.mean;
    j["stddev"] = standardizer.stddev;
    j["support_vectors"] = support_vectors;
    j["dual_coeffs"] = dual_coeffs;
    j["bias"] = bias;
    j["kkt_residual"] = kkt_residual;
    j["training_note"] = training_note;
    const std::string body = j.dump();
    j["content_hash"] = hex64(fnv1a(body));
    return j.dump(2) + "\n";
}

SvmModel SvmModel::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    SvmModel m;
    const std::string kernel = j.at("kernel").get<std::string>();
    if (kernel == "rbf") {
        m.kernel = SvmKernel::rbf;
    } else if (kernel == "linear") {
        m.kernel = SvmKernel::linear;
    } else {
        throw validation_error("svm model: unknown kernel '" + kernel + "'");
    }
    m.kernel_scale = j.at("kernel_scale").get<double>();
    m.box_constraint = j.at("box_constraint").get<double>();
    m.standardizer.mean = j.at("mean").get<std::vector<double>>();
    m.standardizer.stddev = j.at("stddev").get<std::vector<double>>();
    m.support_vectors = j.at("support_vectors").get<std::vector<std::vector<double>>>();
    m.dual_coeffs = j.at("dual_coeffs").get<std::vector<double>>();
    m.bias = j.at("bias").get<double>();
    m.kkt_residual = j.value("kkt_residual", 0.0);
    m.training_note = j.value("training_note", std::string());
    if (m.support_vectors.size() != m.dual_coeffs.size())
        throw validation_error("svm model: support vector / coefficient count mismatch");
    return m;
}

void SvmModel::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw validation_error("cannot write model file: " + path);
    out << to_json();
}

SvmModel SvmModel::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open model file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

}  // namespace lakeice
