"""
Quick demo runner script.
Runs the worked examples through the milnorlab command line, one step per
command, and stops at the first step that exits with an unexpected code.
"""

import subprocess
import sys
import os

DEMO_BATCH = os.path.join("demo", "worked_examples.json")


def run_step(step_number, args, description, expected_code=0):
    """Run a step and handle errors."""
    print("\n" + "=" * 60)
    print(f"STEP {step_number}: {description}")
    print("=" * 60)

    try:
        result = subprocess.run([sys.executable, "-m", "milnorlab", *args], check=False)
    except Exception as e:
        print(f"[ERROR] Error running step {step_number}: {e}")
        return False
    if result.returncode != expected_code:
        print(f"[ERROR] Step {step_number} exited with {result.returncode}, expected {expected_code}")
        return False
    print(f"[OK] Step {step_number} completed successfully")
    return True


def main():
    """Run all steps in sequence."""
    print("=" * 60)
    print("MILNORLAB DEMO - WORKED EXAMPLES")
    print("=" * 60)

    if not os.path.exists(DEMO_BATCH):
        print(f"[ERROR] Job file not found: {DEMO_BATCH}")
        sys.exit(1)

    steps = [
        (1, ["newton", "-f", "x^5+x^2y^2+y^6", "--format", "text"], "Newton boundary and Newton number"),
        (2, ["multcond", "-f", "x^3+y^2", "-g", "x^2+y^2", "--format", "text"], "Newton multiplicity condition"),
        (3, ["zeta-mixed", "-f", "x^5+x^2y^2+y^6", "-g", "x^2+y^2", "--format", "text"], "Mixed zeta function"),
        (4, ["fibration", "-f", "x^5+x^2y^2+y^6", "-g", "x^6+x^2y^2+y^5", "--format", "text"],
         "Critical curves on the Jacobian branches"),
        (5, ["batch", DEMO_BATCH, "--threads", "4", "--format", "text"], "Batch of worked examples"),
    ]

    for step_num, args, desc in steps:
        success = run_step(step_num, args, desc)
        if not success:
            print(f"\n[ERROR] Demo failed at step {step_num}")
            print("Run the command manually with MILNORLAB_LOG_LEVEL=DEBUG to see details.")
            sys.exit(1)

    print("\n" + "=" * 60)
    print("[OK] DEMO COMPLETE!")
    print("=" * 60)
    print("\nNext steps:")
    print("1. Write your own job file (a JSON list of jobs) and run:")
    print("   python -m milnorlab batch jobs.json --out reports.json")
    print("\n2. Check a single pair:")
    print('   python -m milnorlab fibration -f "x^3+y^2" -g "x^2+y^2"')
    print("=" * 60)


if __name__ == "__main__":
    main()
