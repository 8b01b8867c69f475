"""
Quick Start Example - Cellular Blind Interference Alignment
Run this script to walk through the main results
"""
import sys
import os

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

from src import catalog
from src.bounds import converse_lp, orthogonal_max
from src.channel import FadingSpec
from src.index_coding import cb_to_gic, half_dof_feasible, verify_xor_scheme
from src.rational import fraction_text
from src.report import reuse_gains
from src.simulator import estimate_dof, simulate_rates
from src.verifier import verify


def quick_start_demo():
    """
    Quick demonstration of the cellblind tools
    """
    print("="*70)
    print("CELLBLIND - QUICK START DEMO")
    print("="*70)
    print()

    SEED = int(os.getenv("CELLBLIND_SEED", "7"))
    DRAWS = 20

    # Step 1: Four-cell cluster, coherent scheme
    print("Step 1: Verifying the coherent four-cell scheme...")
    print("-" * 70)
    p = catalog.problem("four_cell_downlink")
    s = catalog.scheme("four_cell_downlink", "coherent", p)
    report = verify(p, s, FadingSpec(tau=3, seed=SEED), DRAWS)
    status = "✓" if report.passed else "✗"
    print(f"{status} tau=3: sum DoF {fraction_text(report.sum_dof)} over {DRAWS} draws")
    short = verify(p, s, FadingSpec(tau=1, seed=SEED), DRAWS)
    print(f"  tau=1: failing receivers {', '.join(short.failing_receivers()) or 'none'}")
    print()

    # Step 2: Bounds
    print("Step 2: Converse and orthogonal bounds...")
    print("-" * 70)
    bound = converse_lp(p)
    orth = orthogonal_max(p, "sum")
    print(f"  Converse LP sum bound: {fraction_text(bound.sum_bound)}")
    print(f"  Best orthogonal sum:   {fraction_text(orth.value)}")
    print()

    # Step 3: Frequency reuse on arrays
    print("Step 3: Aligned vs conventional frequency reuse...")
    print("-" * 70)
    for _, row in reuse_gains().iterrows():
        print(f"  {row['geometry']:<7} aligned {fraction_text(row['aligned']):<4} "
              f"conventional {fraction_text(row['conventional']):<4} gain {row['gain_pct']}%")
    print()

    # Step 4: Index coding
    print("Step 4: Index coding views...")
    print("-" * 70)
    g = cb_to_gic(catalog.problem("four_cell_merged"))
    for r in g.receivers:
        print(f"  receiver {r.id:<3} interferers {sorted(g.interferers(r.id))}")
    verdict = half_dof_feasible(catalog.gic("five_message"))
    print(f"  five-message example: half DoF {'feasible' if verdict.feasible else 'infeasible'}")
    if not verdict.feasible:
        for step in verdict.chain:
            print(f"    {step.first} - {step.second} interfere together at receiver {step.receiver}")
    xor = verify_xor_scheme(catalog.macro_femto_gic(), catalog.MACRO_FEMTO_XOR_PLAN)
    print(f"  macro-femto XOR plan: {fraction_text(xor.dof)} DoF")
    print()

    # Step 5: Finite SNR
    print("Step 5: Sum-rate slope at high SNR...")
    print("-" * 70)
    try:
        table = simulate_rates(p, s, FadingSpec(tau=3, seed=SEED), [30.0, 40.0], draws=50)
        estimate = estimate_dof(table, 30.0, 40.0)
        print(f"  Slope 30->40 dB: {estimate.value:.3f} (nearest {fraction_text(estimate.nearest)})")
    except Exception as e:
        print(f"✗ Error simulating rates: {e}")
    print()

    print("="*70)
    print("DEMO COMPLETED!")
    print("="*70)
    print()
    print("Next Steps:")
    print("1. Full reproduction table: python cellblind.py report --seed 7")
    print("2. Tune constants in src/config.py")
    print("3. Run the tests: python -m pytest tests")
    print()


if __name__ == "__main__":
    try:
        quick_start_demo()
    except KeyboardInterrupt:
        print("\n\nDemo interrupted by user")
    except Exception as e:
        print(f"\n\nUnexpected error: {e}")
        print("Please check docs/QUICKSTART.md for troubleshooting")
