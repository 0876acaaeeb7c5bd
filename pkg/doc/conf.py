# Sphinx configuration for harmonic_nav.

import os.path
import sys

sys.path.insert(0, os.path.abspath('..'))

project = 'harmonic_nav'
release = '1.0.0'

master_doc = 'index'
exclude_patterns = ['_build']
extensions = ['sphinx.ext.autodoc']

html_domain_indices = False
html_use_index = False
