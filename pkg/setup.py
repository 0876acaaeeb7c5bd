from setuptools import setup, find_packages

setup(
    name='harmonic_nav',
    version='1.0.0',
    description='Oriented harmonic potential fields and task planning for unicycle robots',
    packages=find_packages(exclude=['tests']),
    package_data={'harmonic_nav': ['data/*']},
    install_requires=[
        'numpy>=1.20',
        'scipy>=1.7',
        'networkx>=2.6',
        'scikit-learn>=1.0',
        'matplotlib>=3.4',
        'jsonlines>=3.1.0',
        'pandas>=1.3',
        'tqdm>=4.60',
    ],
    extras_require={
        'test': ['pytest>=7.0'],
    },
    entry_points={
        'console_scripts': ['harmonic-nav=harmonic_nav.cli:main'],
    },
    license='2-clause BSD',
    zip_safe=True)
