#pragma once

// Reference values printed by tests/oracle/derive.py (mpmath, 30 digits).

#include <array>
#include <utility>

namespace oracle {

inline constexpr std::array<std::pair<double, double>, 13> kBesselK0{{
    {1e-8, 18.536612259610778409},
    {1e-3, 7.0236888005623813436},
    {0.1, 2.4270690247020166125},
    {1.0, 0.42102443824070833334},
    {1.5, 0.21380556264752573672},
    {2.0, 0.11389387274953343565},
    {2.5, 0.062347553200366186029},
    {5.0, 0.0036910983340425942747},
    {10.0, 0.000017780062316167651811},
    {24.9, 3.8360965209894864969e-12},
    {25.1, 3.1283127143211216324e-12},
    {100.0, 4.6566282291759020189e-45},
    {600.0, 1.3558285309948524376e-262},
}};

inline constexpr std::array<std::pair<double, double>, 9> kLogGamma{{
    {0.25, 1.2880225246980774574},
    {0.5, 0.57236494292470008707},
    {1.5, -0.12078223763524522235},
    {3.7, 1.4280723266653879219},
    {14.9, 24.924132002217277353},
    {15.1, 25.458999750992664036},
    {50.0, 144.56574394634488601},
    {170.5, 704.00442773420467079},
    {1000.0, 5905.2204232091812118},
}};

inline constexpr double kBeta01At05 = 0.5;
inline constexpr double kBetaHalfThreeHalvesAt03 = 0.35008299549359972925;
inline constexpr int kSignMatricesReal = 12;

inline constexpr std::array<std::pair<int, double>, 5> kBetaSeries{{
    {1, 0.63102324263038548753},
    {2, 0.62836055331060326065},
    {3, 0.62735263117809058216},
    {5, 0.62646924563134175222},
    {10, 0.62575740046093612488},
}};

inline constexpr std::array<std::pair<int, double>, 6> kGammaSum{{
    {1, 0.73333333333333333333},
    {2, 0.68325008325008325008},
    {3, 0.66039327030039104343},
    {10, 0.63323845688875850869},
    {50, 0.62852834796034622641},
    {100, 0.62749416123846005483},
}};

inline constexpr std::array<std::pair<int, double>, 4> kGinibreExpectedReal{{
    {2, 1.4142135623730950488},
    {3, 1.7071067811865475244},
    {4, 1.9445436482630056921},
    {8, 2.6502693615175482409},
}};

// Laplace-base Hadamard K = 2, pooled Monte Carlo (4e6 samples)
inline constexpr double kLaplaceHadamardK2 = 0.773740;
inline constexpr double kLaplaceHadamardK2Sigma = 2.7e-5;

}  // namespace oracle
