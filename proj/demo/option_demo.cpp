#include <iostream>

#include "fineval/options.hpp"

int main()
{
    using namespace fineval;
    OptionQuote q{100.0, 105.0, 0.03, 0.5, OptionKind::call, 0.0};
    q.market_price = bs_price(q, 0.25);
    const double iv = implied_vol(q);
    const auto g = greeks(q, iv);
    std::cout.precision(10);
    std::cout << "price " << q.market_price << "\n"
              << "iv    " << iv << "\n"
              << "delta " << g.delta << "  gamma " << g.gamma << "  vega " << g.vega << "\n"
              << "theta " << g.theta << "  rho " << g.rho_rate << "\n";

    // Deep out-of-the-money: the price only exists in extended precision.
    BasicOptionQuote<long double> deep{80.0L, 100.0L, 0.05L, 0.01L, OptionKind::call, 0.0L};
    deep.market_price = bs_price(deep, 0.05L);
    std::cout << "deep OTM price " << deep.market_price << ", iv " << implied_vol(deep) << "\n";
}
