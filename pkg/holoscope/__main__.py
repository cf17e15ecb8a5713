"""
__main__
~~~~~~~~

The mainline for holoscope.
"""
from holoscope.cli import main


main()
