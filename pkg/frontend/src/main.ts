// Page wiring: one session per tab, every step waits for the server.

import { ApiError, SessionApi } from './api.js'
import { renderBudget, renderCards, renderError, renderWarnings } from './render.js'
import { SessionController } from './state.js'

const api = new SessionApi('')
const controller = new SessionController(api)

const grid = document.getElementById('cards') as HTMLElement
const budgetNode = document.getElementById('budget') as HTMLElement
const warningsNode = document.getElementById('warnings') as HTMLElement
const errorNode = document.getElementById('error') as HTMLElement
const form = document.getElementById('create-form') as HTMLFormElement
const submitButton = document.getElementById('submit-generation') as HTMLButtonElement

let busy = false

function frozenElementsByNames(names: string[]): number[] | null {
  const wanted = new Set(names)
  for (const group of controller.session?.frozen_classes ?? []) {
    if (group.names.every((name) => wanted.has(name))) return group.elements
  }
  return null
}

function redraw(): void {
  if (!controller.session) return
  renderBudget(budgetNode, controller.budget())
  renderWarnings(warningsNode, controller.warnings)
  const exhausted = controller.budget().exhausted
  renderCards(grid, controller.cards(), frozenElementsByNames, handlers, busy || exhausted)
  submitButton.disabled = busy || exhausted || !controller.population
}

async function guarded(action: () => Promise<void>): Promise<void> {
  if (busy) return
  busy = true
  renderError(errorNode, null)
  redraw()
  try {
    await action()
  } catch (error) {
    if (error instanceof ApiError) renderError(errorNode, error.detail)
    else renderError(errorNode, String(error))
  } finally {
    busy = false
    redraw()
  }
}

const handlers = {
  onRate(index: number, level: number): void {
    controller.rate(index, level)
  },
  onFreeze(candidate: number, classIndex: number): void {
    void guarded(async () => {
      await controller.freeze(candidate, classIndex)
    })
  },
  onUnfreeze(elements: number[]): void {
    void guarded(async () => {
      await controller.unfreeze(elements)
    })
  },
  onSubmit(): void {
    void guarded(async () => {
      await controller.submitGeneration()
    })
  },
}

form.addEventListener('submit', (event) => {
  event.preventDefault()
  const data = new FormData(form)
  void guarded(async () => {
    await controller.create(
      String(data.get('problem')),
      String(data.get('engine')),
      { seed: Number(data.get('seed') ?? 0) },
    )
  })
})

submitButton.addEventListener('click', () => handlers.onSubmit())
