# -*- coding: utf-8 -*-

import sys
from setuptools import setup, find_namespace_packages


unix_dep = [
    'wheel',
    'matplotlib',
    'numpy',
    'ruamel.yaml>=0.17.16',
    'scipy>=1.7.1',
    'jsonschema>=4.2.1',
]

windows_dep = [
    'wheel>=0.37.0',
    'matplotlib>=3.4.3',
    'numpy>=1.21.3',
    'ruamel.yaml>=0.17.16',
    'scipy>=1.7.1',
    'jsonschema>=4.2.1',
]

test_dep = [
    'pytest>=7.0',
    'hypothesis>=6.0',
]

with open('VERSION', 'r') as file:
    version = file.read().strip()

with open('README.md', 'r') as file:
    long_description = file.read()

setup(
    name='lcreg',
    version=version,
    packages=find_namespace_packages(where='src'),
    package_dir={'': 'src'},
    package_data={'': ['AUTHORS.md', 'README.md', 'VERSION']},
    description='Long-tailed image recognition with latent category regularization',
    long_description=long_description,
    long_description_content_type='text/markdown',
    keywords=['long-tailed recognition',
              'class imbalance',
              'latent categories',
              'feature augmentation',
              'decoupled training',
              'autodiff',
              'machine learning'
              ],
    license='LGPLv3',
    install_requires=windows_dep if sys.platform == 'win32' else unix_dep,
    extras_require={'test': test_dep},
    python_requires='>=3.8',
    classifiers=['Development Status :: 3 - Alpha',

                 'Intended Audience :: Developers',
                 'Intended Audience :: Science/Research',

                 'License :: OSI Approved :: GNU Lesser General Public License v3 (LGPLv3)',

                 'Natural Language :: English',

                 'Operating System :: Microsoft :: Windows :: Windows 10',
                 'Operating System :: MacOS :: MacOS X',
                 'Operating System :: Unix',
                 'Operating System :: POSIX :: Linux',

                 'Programming Language :: Python :: 3.8',
                 'Programming Language :: Python :: 3.9',
                 'Programming Language :: Python :: 3.10',
                 'Programming Language :: Python :: 3.11',

                 'Topic :: Scientific/Engineering',
                 'Topic :: Scientific/Engineering :: Artificial Intelligence',
                 ],
    entry_points={
        'console_scripts': ['lcreg=lcreg.core.cli:main']
    },
    zip_safe=False
)
