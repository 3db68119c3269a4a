#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
测试模块

网格、Cauchy 算子、相位、δ、分解、求解器、渐近式、衰减实验与命令行的单元测试
"""
