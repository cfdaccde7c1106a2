import { describe, expect, it } from 'vitest'

import {
  ApiError,
  PopulationResponse,
  RatingEntry,
  SessionApi,
  SessionSummary,
} from '../src/api.js'
import { DEFAULT_LEVEL, RATING_LEVELS, SessionController } from '../src/state.js'

function summary(overrides: Partial<SessionSummary> = {}): SessionSummary {
  return {
    id: 's1',
    problem: 'toy',
    engine: 'aco',
    status: 'active',
    generation: 0,
    evaluations: 0,
    evaluation_cap: 250,
    frozen_classes: [],
    best_so_far: null,
    ...overrides,
  }
}

function population(overrides: Partial<PopulationResponse> = {}): PopulationResponse {
  const candidates = Array.from({ length: 10 }, (_, index) => ({
    index,
    feasible: true,
    f_cbo: 50 + index,
    classes: [
      { attributes: ['a0'], methods: ['m0'] },
      { attributes: ['a1'], methods: ['m1'] },
    ],
  }))
  return { generation: 0, evaluations: 0, frozen_classes: [], candidates, ...overrides }
}

interface MockBehaviour {
  submitError?: ApiError
  engine?: string
  frozen?: { elements: number[]; names: string[] }[]
}

function mockApi(behaviour: MockBehaviour = {}) {
  const calls: { method: string; args: unknown[] }[] = []
  let generation = 0
  const api = {
    async createSession(problem: string, engine: string) {
      calls.push({ method: 'createSession', args: [problem, engine] })
      return summary({ engine: behaviour.engine ?? engine })
    },
    async getSession(id: string) {
      calls.push({ method: 'getSession', args: [id] })
      return summary({
        engine: behaviour.engine ?? 'aco',
        generation,
        evaluations: generation * 10,
        frozen_classes: behaviour.frozen ?? [],
      })
    },
    async getPopulation(id: string) {
      calls.push({ method: 'getPopulation', args: [id] })
      return population({
        generation,
        frozen_classes: behaviour.frozen ?? [],
      })
    },
    async submitRatings(id: string, ratings: RatingEntry[]) {
      calls.push({ method: 'submitRatings', args: [id, ratings] })
      if (behaviour.submitError) throw behaviour.submitError
      generation += 1
      return summary({
        engine: behaviour.engine ?? 'aco',
        generation,
        evaluations: generation * 10,
      })
    },
    async freezeClass(id: string, candidate: number, classIndex: number) {
      calls.push({ method: 'freezeClass', args: [id, candidate, classIndex] })
      return { frozen: [0, 2] }
    },
    async unfreezeClass(id: string, elements: number[]) {
      calls.push({ method: 'unfreezeClass', args: [id, elements] })
      return { unfrozen: elements }
    },
  }
  return { api: api as unknown as SessionApi, calls }
}

describe('rating controls', () => {
  it('offers exactly seven levels', () => {
    expect(RATING_LEVELS).toHaveLength(7)
    expect(RATING_LEVELS[0]).toBe(1)
    expect(RATING_LEVELS[6]).toBe(7)
  })

  it('rejects out-of-range levels', async () => {
    const { api } = mockApi()
    const controller = new SessionController(api)
    await controller.create('toy', 'aco')
    expect(() => controller.rate(0, 8)).toThrow(/1\.\.7/)
    expect(() => controller.rate(0, 0)).toThrow(/1\.\.7/)
    expect(() => controller.rate(42, 5)).toThrow(/no candidate/)
  })
})

describe('card view-models', () => {
  it('renders ten cards with api-provided coupling badges', async () => {
    const { api } = mockApi()
    const controller = new SessionController(api)
    await controller.create('toy', 'aco')
    const cards = controller.cards()
    expect(cards).toHaveLength(10)
    expect(cards[3].couplingBadge).toBe('53.0')
    expect(cards[3].classes).toHaveLength(2)
  })

  it('hides freeze affordances for evolutionary sessions', async () => {
    const { api } = mockApi({ engine: 'ea-xp' })
    const controller = new SessionController(api)
    await controller.create('toy', 'ea-xp')
    const cards = controller.cards()
    expect(cards.every((card) => card.classes.every((box) => !box.canFreeze))).toBe(true)
  })

  it('marks pinned classes on every card containing them', async () => {
    const frozen = [{ elements: [0, 2], names: ['a0', 'm0'] }]
    const { api } = mockApi({ frozen })
    const controller = new SessionController(api)
    await controller.create('toy', 'aco')
    const cards = controller.cards()
    for (const card of cards) {
      expect(card.classes[0].frozen).toBe(true)
      expect(card.classes[1].frozen).toBe(false)
    }
  })
})

describe('submitting a generation', () => {
  it('defaults unrated candidates to the midpoint with a warning', async () => {
    const { api, calls } = mockApi()
    const controller = new SessionController(api)
    await controller.create('toy', 'aco')
    controller.rate(0, 7)
    controller.rate(5, 1)
    await controller.submitGeneration()
    const submit = calls.find((c) => c.method === 'submitRatings')!
    const entries = submit.args[1] as RatingEntry[]
    expect(entries).toHaveLength(10)
    expect(entries[0]).toEqual({ index: 0, level: 7 })
    expect(entries[5]).toEqual({ index: 5, level: 1 })
    expect(entries[1]).toEqual({ index: 1, level: DEFAULT_LEVEL })
    expect(controller.warnings).toHaveLength(8)
  })

  it('increments the generation counter and clears ratings', async () => {
    const { api } = mockApi()
    const controller = new SessionController(api)
    await controller.create('toy', 'aco')
    controller.rate(0, 6)
    const result = await controller.submitGeneration()
    expect(result.generation).toBe(1)
    expect(controller.ratings.size).toBe(0)
  })

  it('keeps entered ratings when a conflict forces a refetch', async () => {
    const { api } = mockApi({ submitError: new ApiError(409, 'busy') })
    const controller = new SessionController(api)
    await controller.create('toy', 'aco')
    controller.rate(2, 6)
    await expect(controller.submitGeneration()).rejects.toThrow(/409/)
    expect(controller.ratings.get(2)).toBe(6)
    expect(controller.population).not.toBeNull()
  })

  it('budget display mirrors the api numbers', async () => {
    const { api } = mockApi()
    const controller = new SessionController(api)
    await controller.create('toy', 'aco')
    await controller.submitGeneration()
    const budget = controller.budget()
    expect(budget.evaluations).toBe(10)
    expect(budget.cap).toBe(250)
    expect(budget.remaining).toBe(240)
    expect(budget.exhausted).toBe(false)
  })
})
