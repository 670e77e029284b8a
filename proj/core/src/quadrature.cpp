#include "lagrmc/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace lagrmc {
namespace {

struct NodeWeight {
    double x;
    double w;
};

// Positive half of the 64-point Gauss-Hermite rule for weight e^{-x^2};
// the mirror node -x carries the same weight.
constexpr NodeWeight kGH64[32] = {
    {1.38302244987009715e-01, 2.71377424941303902e-01},
    {4.14988824121078681e-01, 2.32994786062678177e-01},
    {6.91922305810044547e-01, 1.71685842349083656e-01},
    {9.69269423071178027e-01, 1.08498349306186723e-01},
    {1.24720015694311792e+00, 5.87399819640994428e-02},
    {1.52588914020986355e+00, 2.72031289536889091e-02},
    {1.80551717146554491e+00, 1.07560405098791299e-02},
    {2.08627287988176180e+00, 3.62258697853445845e-03},
    {2.36835458863240156e+00, 1.03632909950757460e-03},
    {2.65197243543063488e+00, 2.50983698513062583e-04},
    {2.93735082300462169e+00, 5.12592913578627409e-05},
    {3.22473129199203568e+00, 8.78849923085035900e-06},
    {3.51437593574090634e+00, 1.25834025103118171e-06},
    {3.80657151394536042e+00, 1.49553293672724677e-07},
    {4.10163447456665686e+00, 1.46512531647610567e-08},
    {4.39991716822813750e+00, 1.17361674232155589e-09},
    {4.70181564740749991e+00, 7.61521725014539772e-11},
    {5.00777960219876839e+00, 3.95917776694771059e-12},
    {5.31832522463327084e+00, 1.62834073070971825e-13},
    {5.63405216434997236e+00, 5.21862372659081109e-15},
    {5.95566632679948604e+00, 1.28009339132243320e-16},
    {6.28401122877482798e+00, 2.35188471067583268e-18},
    {6.62011226263602737e+00, 3.15225456650376834e-20},
    {6.96524112055110756e+00, 2.98286278427984379e-22},
    {7.32101303278094928e+00, 1.91170688330063649e-24},
    {7.68954016404049678e+00, 7.86179778892592019e-27},
    {8.07368728501022481e+00, 1.92910359546499477e-29},
    {8.47752908337986355e+00, 2.54966089911293405e-32},
    {8.90724909996476910e+00, 1.55739062462980566e-35},
    {9.37315954964672216e+00, 3.42113801125560060e-39},
    {9.89528758682953935e+00, 1.67974799010812651e-43},
    {1.05261231679605469e+01, 5.53570653585670235e-49},
};

// Positive half of the 64-point Gauss-Legendre rule on [-1, 1].
constexpr NodeWeight kGL64[32] = {
    {2.43502926634244291e-02, 4.86909570091397514e-02},
    {7.29931217877990424e-02, 4.85754674415034560e-02},
    {1.21462819296120558e-01, 4.83447622348029543e-02},
    {1.69644420423992803e-01, 4.79993885964583172e-02},
    {2.17423643740007083e-01, 4.75401657148303014e-02},
    {2.64687162208767424e-01, 4.69681828162099996e-02},
    {3.11322871990210970e-01, 4.62847965813143747e-02},
    {3.57220158337668126e-01, 4.54916279274181143e-02},
    {4.02270157963991626e-01, 4.45905581637565454e-02},
    {4.46366017253464087e-01, 4.35837245293234643e-02},
    {4.89403145707052956e-01, 4.24735151236535977e-02},
    {5.31279464019894565e-01, 4.12625632426234859e-02},
    {5.71895646202634000e-01, 3.99537411327203495e-02},
    {6.11155355172393278e-01, 3.85501531786155913e-02},
    {6.48965471254657311e-01, 3.70551285402401509e-02},
    {6.85236313054233270e-01, 3.54722132568823234e-02},
    {7.19881850171610771e-01, 3.38051618371417867e-02},
    {7.52819907260531940e-01, 3.20579283548514532e-02},
    {7.83972358943341385e-01, 3.02346570724024953e-02},
    {8.13265315122797539e-01, 2.83396726142597019e-02},
    {8.40629296252580316e-01, 2.63774697150546272e-02},
    {8.65999398154092770e-01, 2.43527025687108531e-02},
    {8.89315445995114140e-01, 2.22701738083830071e-02},
    {9.10522137078502825e-01, 2.01348231535300945e-02},
    {9.29569172131939570e-01, 1.79517157756973016e-02},
    {9.46411374858402765e-01, 1.57260304760250824e-02},
    {9.61008799652053769e-01, 1.34630478967182315e-02},
    {9.73326827789910975e-01, 1.11681394601314665e-02},
    {9.83336253884625977e-01, 8.84675982636439102e-03},
    {9.91013371476744287e-01, 6.50445796897965427e-03},
    {9.96340116771955220e-01, 4.14703326056292329e-03},
    {9.99305041735772170e-01, 1.78328072169421517e-03},
};

} // namespace

double gauss_hermite_expect(const std::function<double(double)>& f, double mean,
                            double stddev) {
    // V = mean + stddev * sqrt(2) * x with x ~ weight e^{-x^2}.
    const double s = stddev * std::numbers::sqrt2;
    double acc = 0.0;
    for (const auto& nw : kGH64) {
        const double dx = s * nw.x;
        acc += nw.w * (f(mean + dx) + f(mean - dx));
    }
    return acc / std::sqrt(std::numbers::pi);
}

double gauss_legendre_panel(const std::function<double(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = 0.0;
    for (const auto& nw : kGL64) {
        const double dx = half * nw.x;
        acc += nw.w * (f(mid + dx) + f(mid - dx));
    }
    return acc * half;
}

double gauss_legendre_split(const std::function<double(double)>& f, double a, double b,
                            std::span<const double> breakpoints) {
    std::vector<double> cuts;
    cuts.push_back(a);
    for (double c : breakpoints)
        if (c > a && c < b) cuts.push_back(c);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());

    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        acc += gauss_legendre_panel(f, cuts[i], cuts[i + 1]);
    return acc;
}

} // namespace lagrmc
