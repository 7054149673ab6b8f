#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "ncpopt/moment.hpp"
#include "ncpopt/relaxation.hpp"

namespace ncpopt {

/// Hankel matrix of the solved moment functional restricted to the words
/// of an index set: entry(u,v) = y[key(u* v)], unit key pinned to 1.
/// Graded-lex labels, so the degree-d corner is a leading principal block.
struct HankelView {
    WordBasis labels;
    Eigen::MatrixXd matrix;

    HankelView() = default;

    HankelView(const VarSet& vars, int order, const MomentVariableTable& table,
               const Eigen::VectorXd& y)
        : labels(vars, order) {
        int n = static_cast<int>(labels.size());
        matrix.resize(n, n);
        for (int i = 0; i < n; ++i) {
            Word ui = labels.words[i].star();
            for (int j = i; j < n; ++j) {
                int id = table.lookup(ui * labels.words[j]);
                double v;
                if (id == MomentVariableTable::kUnit)
                    v = 1.0;
                else if (id < 0)
                    throw std::out_of_range("moment value for " + (ui * labels.words[j]).str() +
                                            " is not part of the solved relaxation");
                else
                    v = y[id];
                matrix(i, j) = v;
                matrix(j, i) = v;
            }
        }
    }

    int size() const { return static_cast<int>(labels.size()); }

    /// Leading principal submatrix holding the words of degree <= d.
    HankelView corner(int d) const {
        HankelView out;
        out.labels = labels;
        out.labels.order = d;
        long keep = 0;
        while (keep < static_cast<long>(labels.size()) && labels.words[keep].degree() <= d) ++keep;
        out.labels.words.assign(labels.words.begin(), labels.words.begin() + keep);
        out.matrix = matrix.topLeftCorner(keep, keep);
        return out;
    }

    /// Rows/columns whose label words use only variables in sub.
    HankelView restrict_to(const VarSet& sub) const {
        HankelView out;
        out.labels.clique = sub;
        out.labels.order = labels.order;
        std::vector<int> keep;
        for (size_t i = 0; i < labels.size(); ++i) {
            auto supp = labels.words[i].support();
            if (std::includes(sub.begin(), sub.end(), supp.begin(), supp.end())) {
                keep.push_back(static_cast<int>(i));
                out.labels.words.push_back(labels.words[i]);
            }
        }
        out.matrix.resize(keep.size(), keep.size());
        for (size_t a = 0; a < keep.size(); ++a)
            for (size_t b = 0; b < keep.size(); ++b) out.matrix(a, b) = matrix(keep[a], keep[b]);
        return out;
    }
};

}  // namespace ncpopt
