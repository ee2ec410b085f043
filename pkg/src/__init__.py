# -*- coding: utf-8 -*-
"""
Twin Oscillator Entanglement パッケージ
"""

from .__version__ import __version__
